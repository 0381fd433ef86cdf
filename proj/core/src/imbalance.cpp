#include "imbtext/imbalance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "imbtext/error.hpp"

namespace imbtext {

ClassWeights class_weights(const std::vector<std::int64_t>& counts, Task task) {
    if (counts.empty()) throw ValidationError("class_weights: empty count vector");
    std::int64_t n = 0;
    for (std::int64_t c : counts) {
        if (c < 1) throw ValidationError("class_weights: class count must be >= 1 (weight undefined)");
        n += c;
    }
    ClassWeights cw;
    cw.task = task;
    cw.weights.reserve(counts.size());
    const double c = static_cast<double>(counts.size());
    for (std::int64_t n_j : counts) cw.weights.push_back(static_cast<double>(n) / (c * static_cast<double>(n_j)));
    return cw;
}

SampleWeights sample_weights(const std::vector<std::vector<int>>& unit_labels, const LabelSpace& space,
                             const std::vector<std::int64_t>& counts) {
    if (counts.size() != space.labels.size())
        throw ValidationError("sample_weights: counts not aligned with the label space");
    SampleWeights sw;
    sw.weights.reserve(unit_labels.size());
    for (std::size_t i = 0; i < unit_labels.size(); ++i) {
        const auto& labels = unit_labels[i];
        if (labels.empty())
            throw ValidationError("sample_weights: sample " + std::to_string(i) + " has no labels");
        std::int64_t min_count = -1;
        for (int l : labels) {
            if (l < 0 || l >= space.size())
                throw ValidationError("sample_weights: sample " + std::to_string(i) +
                                      " has a label outside the label space");
            if (counts[l] < 1)
                throw ValidationError("sample_weights: label '" + space.labels[l] + "' has count 0");
            if (min_count < 0 || counts[l] < min_count) min_count = counts[l];
        }
        sw.weights.push_back(1.0 / static_cast<double>(min_count));
    }
    return sw;
}

BatchStream::BatchStream(const SampleWeights& weights, int batch_size, std::uint64_t seed,
                         double epoch_multiplier)
    : batch_size_(batch_size), epoch_length_(0), rng_(seed) {
    if (batch_size < 1) throw ValidationError("weighted_batches: batch_size must be >= 1");
    if (weights.weights.empty()) throw ValidationError("weighted_batches: empty weight vector");
    if (!(epoch_multiplier > 0.0)) throw ValidationError("weighted_batches: epoch multiplier must be > 0");

    cumulative_.reserve(weights.weights.size());
    double total = 0.0;
    for (double w : weights.weights) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw ValidationError("weighted_batches: sample weights must be positive and finite");
        total += w;
        cumulative_.push_back(total);
    }
    const double len = std::round(static_cast<double>(weights.weights.size()) * epoch_multiplier);
    epoch_length_ = std::max(1, static_cast<int>(len));
}

std::vector<std::vector<int>> BatchStream::next_epoch() {
    const double total = cumulative_.back();
    std::vector<std::vector<int>> batches;
    batches.reserve(static_cast<std::size_t>(epoch_length_ / batch_size_) + 1);
    std::vector<int> batch;
    batch.reserve(batch_size_);
    for (int d = 0; d < epoch_length_; ++d) {
        const double x = rng_.next_double() * total;
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
        const int idx = static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                                  cumulative_.size() - 1));
        batch.push_back(idx);
        if (static_cast<int>(batch.size()) == batch_size_) {
            batches.push_back(std::move(batch));
            batch.clear();
            batch.reserve(batch_size_);
        }
    }
    if (!batch.empty()) batches.push_back(std::move(batch));
    return batches;
}

std::vector<std::size_t> undersample(const std::vector<int>& labels, LabelMode mode, std::uint64_t seed) {
    if (mode != LabelMode::Multiclass)
        throw ValidationError("undersample: only defined for multiclass tasks");
    if (labels.empty()) throw ValidationError("undersample: empty dataset");

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    std::size_t minority = labels.size();
    for (const auto& [cls, members] : by_class) minority = std::min(minority, members.size());

    Rng rng(seed);
    std::vector<std::size_t> kept;
    for (auto& [cls, members] : by_class) {
        std::vector<std::size_t> m = members;
        rng.shuffle(m);
        m.resize(minority);
        kept.insert(kept.end(), m.begin(), m.end());
    }
    rng.shuffle(kept);
    return kept;
}

}  // namespace imbtext
