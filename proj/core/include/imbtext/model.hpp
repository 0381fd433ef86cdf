#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "imbtext/features.hpp"
#include "imbtext/imbalance.hpp"
#include "imbtext/task.hpp"

namespace imbtext {

// Row-major dense matrix.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

struct ParamBlock {
    Mat w;
    std::vector<double> b;
};

// Shared trunk (one relu hidden layer, optional) plus task head. The trunk
// is what the task-dependent strategy carries from one task to the next.
struct ModelParams {
    std::optional<ParamBlock> trunk;  // w: dim_in x hidden
    ParamBlock head;                  // w: (hidden | dim_in) x label_count
    LabelMode mode = LabelMode::Multiclass;

    int dim_in() const { return trunk ? trunk->w.rows : head.w.rows; }
    int hidden() const { return trunk ? trunk->w.cols : 0; }
    int label_count() const { return head.w.cols; }
};

// Gradient (or moment) tensors shaped like a ModelParams.
struct ParamGrads {
    std::optional<ParamBlock> trunk;
    ParamBlock head;
};

struct PredictionVector {
    LabelMode mode = LabelMode::Multiclass;
    std::vector<double> probs;  // multiclass: sums to 1; multilabel: independent
};

struct ForwardCache {
    std::vector<double> hidden_pre;
    std::vector<double> hidden;
    std::vector<double> logits;
};

struct LossResult {
    double loss = 0.0;
    std::vector<double> dlogits;  // gradient wrt pre-softmax / pre-sigmoid logits
};

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases.
// hidden == 0 builds a trunkless model (head directly on the features).
ModelParams init_model(int dim_in, int hidden, int label_count, LabelMode mode, std::uint64_t seed);

ParamGrads zero_grads(const ModelParams& params);

PredictionVector forward(const ModelParams& params, const FeatureVector& x);
PredictionVector forward_cached(const ModelParams& params, const FeatureVector& x, ForwardCache& cache);

// Class-weighted cross-entropy for multiclass targets:
//   L = -sum_j w_j * y_j * log(p_j)
// with probabilities clipped to [1e-12, 1] before the log. The one-hot target
// must contain exactly one 1.
LossResult weighted_ce_loss(const PredictionVector& pred, const std::vector<int>& one_hot,
                            const ClassWeights& cw);

// Mean binary cross-entropy over labels (multilabel tasks; class weights are
// deliberately not applied here).
LossResult bce_loss(const PredictionVector& pred, const std::vector<int>& multi_hot);

// Accumulates parameter gradients for one sample into `grads`.
void backward(const ModelParams& params, const FeatureVector& x, const ForwardCache& cache,
              const std::vector<double>& dlogits, ParamGrads& grads);

void scale_grads(ParamGrads& grads, double factor);

// Multiclass decision: argmax, ties to the lowest label index.
int predict_multiclass(const PredictionVector& pred);

// Multilabel decision: labels with prob strictly above the threshold, with
// the synthetic None label (none_idx >= 0) removed from the emitted set.
std::vector<int> predict_multilabel(const PredictionVector& pred, double threshold, int none_idx = -1);

// FNV-1a over the trunk's parameter bytes; 0 for trunkless models.
std::uint64_t trunk_digest(const ModelParams& params);

struct Provenance {
    Task task = Task::T1;
    int fold = 0;
    int epoch = 0;
    double val_score = 0.0;
    std::uint64_t init_trunk_digest = 0;  // trunk state when training started
};

struct ModelCheckpoint {
    ModelParams params;
    Provenance prov;
    std::vector<std::string> labels;  // label order the head was trained with
};

// Task-dependent transfer: copy the source trunk bitwise, reinitialize the
// head for the new task via the init_model rule. Trunkless sources are an
// error (there is nothing to share).
ModelParams transfer_trunk(const ModelCheckpoint& source, int new_label_count, LabelMode new_mode,
                           std::uint64_t seed);

}  // namespace imbtext
