#pragma once

#include <cstdint>
#include <vector>

#include "imbtext/corpus.hpp"
#include "imbtext/rng.hpp"
#include "imbtext/task.hpp"

namespace imbtext {

// Per-class loss multipliers, aligned with the LabelSpace order:
//   w_j = n / (c * n_j)
// where n is the total labeled sample count, c the class count and n_j the
// count of class j. Balanced classes get weight 1; minority classes more.
struct ClassWeights {
    Task task = Task::T1;
    std::vector<double> weights;
};

ClassWeights class_weights(const std::vector<std::int64_t>& counts, Task task = Task::T1);

// Per-sample sampling weights. Multiclass samples get 1/n_class; multilabel
// samples get 1 over the count of their rarest positive label, so the
// expected class mix of weighted batches is balanced.
struct SampleWeights {
    std::vector<double> weights;
};

// `unit_labels[i]` holds label indices into `space` (one for multiclass).
// `counts` are the per-label sample counts the weights derive from (usually
// the training split's own counts).
SampleWeights sample_weights(const std::vector<std::vector<int>>& unit_labels, const LabelSpace& space,
                             const std::vector<std::int64_t>& counts);

// Weighted random sampling with replacement: P(i) = w_i / sum(w). One epoch
// draws epoch_length indices (dataset size times the multiplier), chunked
// into batches; the last batch may be short. Sequential and deterministic
// for a fixed seed.
class BatchStream {
public:
    BatchStream(const SampleWeights& weights, int batch_size, std::uint64_t seed,
                double epoch_multiplier = 1.0);

    std::vector<std::vector<int>> next_epoch();

    int epoch_length() const { return epoch_length_; }
    int batch_size() const { return batch_size_; }

private:
    std::vector<double> cumulative_;
    int batch_size_;
    int epoch_length_;
    Rng rng_;
};

// Down-samples every class without replacement to the minority-class count.
// `labels[i]` is the class index of sample i. Returns the retained sample
// indices, shuffled deterministically by seed. Multiclass only.
std::vector<std::size_t> undersample(const std::vector<int>& labels, LabelMode mode, std::uint64_t seed);

}  // namespace imbtext
