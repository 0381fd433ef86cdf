#include "imbtext/model.hpp"

#include <algorithm>
#include <cmath>

#include "imbtext/error.hpp"
#include "imbtext/rng.hpp"

namespace imbtext {

namespace {

constexpr double kProbFloor = 1e-12;

void glorot_fill(Mat& w, Rng& rng) {
    const double bound = std::sqrt(6.0 / (w.rows + w.cols));
    for (double& v : w.a) v = bound * (2.0 * rng.next_double() - 1.0);
}

// out = b + w^T x, with x sparse or dense.
void apply_input(const Mat& w, const std::vector<double>& b, const FeatureVector& x,
                 std::vector<double>& out) {
    if (x.dim != w.rows)
        throw ValidationError("forward: feature dimension " + std::to_string(x.dim) +
                              " does not match model input " + std::to_string(w.rows));
    out = b;
    if (x.is_dense) {
        for (int i = 0; i < w.rows; ++i) {
            const double xi = x.dense[i];
            if (xi == 0.0) continue;
            const double* row = w.a.data() + static_cast<std::size_t>(i) * w.cols;
            for (int j = 0; j < w.cols; ++j) out[j] += row[j] * xi;
        }
    } else {
        for (const auto& [i, xi] : x.entries) {
            const double* row = w.a.data() + static_cast<std::size_t>(i) * w.cols;
            for (int j = 0; j < w.cols; ++j) out[j] += row[j] * xi;
        }
    }
}

void apply_dense(const Mat& w, const std::vector<double>& b, const std::vector<double>& x,
                 std::vector<double>& out) {
    out = b;
    for (int i = 0; i < w.rows; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* row = w.a.data() + static_cast<std::size_t>(i) * w.cols;
        for (int j = 0; j < w.cols; ++j) out[j] += row[j] * xi;
    }
}

void softmax(std::vector<double>& z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        total += v;
    }
    for (double& v : z) v /= total;
}

}  // namespace

ModelParams init_model(int dim_in, int hidden, int label_count, LabelMode mode, std::uint64_t seed) {
    if (dim_in < 1 || label_count < 1 || hidden < 0)
        throw ValidationError("init_model: dimensions must be positive");
    Rng rng(seed);
    ModelParams params;
    params.mode = mode;
    if (hidden > 0) {
        ParamBlock trunk;
        trunk.w = Mat(dim_in, hidden);
        trunk.b.assign(hidden, 0.0);
        glorot_fill(trunk.w, rng);
        params.trunk = std::move(trunk);
        params.head.w = Mat(hidden, label_count);
    } else {
        params.head.w = Mat(dim_in, label_count);
    }
    params.head.b.assign(label_count, 0.0);
    glorot_fill(params.head.w, rng);
    return params;
}

ParamGrads zero_grads(const ModelParams& params) {
    ParamGrads g;
    if (params.trunk) {
        ParamBlock t;
        t.w = Mat(params.trunk->w.rows, params.trunk->w.cols);
        t.b.assign(params.trunk->b.size(), 0.0);
        g.trunk = std::move(t);
    }
    g.head.w = Mat(params.head.w.rows, params.head.w.cols);
    g.head.b.assign(params.head.b.size(), 0.0);
    return g;
}

PredictionVector forward_cached(const ModelParams& params, const FeatureVector& x, ForwardCache& cache) {
    if (params.trunk) {
        apply_input(params.trunk->w, params.trunk->b, x, cache.hidden_pre);
        cache.hidden = cache.hidden_pre;
        for (double& v : cache.hidden) v = std::max(0.0, v);
        apply_dense(params.head.w, params.head.b, cache.hidden, cache.logits);
    } else {
        cache.hidden_pre.clear();
        cache.hidden.clear();
        apply_input(params.head.w, params.head.b, x, cache.logits);
    }

    PredictionVector pred;
    pred.mode = params.mode;
    pred.probs = cache.logits;
    if (params.mode == LabelMode::Multiclass) {
        softmax(pred.probs);
    } else {
        for (double& v : pred.probs) v = 1.0 / (1.0 + std::exp(-v));
    }
    return pred;
}

PredictionVector forward(const ModelParams& params, const FeatureVector& x) {
    ForwardCache cache;
    return forward_cached(params, x, cache);
}

LossResult weighted_ce_loss(const PredictionVector& pred, const std::vector<int>& one_hot,
                            const ClassWeights& cw) {
    if (pred.mode != LabelMode::Multiclass)
        throw ValidationError("weighted_ce_loss: prediction is not multiclass");
    const std::size_t n = pred.probs.size();
    if (one_hot.size() != n) throw ValidationError("weighted_ce_loss: target size mismatch");
    if (cw.weights.size() != n) throw ValidationError("weighted_ce_loss: class weight size mismatch");

    int target = -1;
    for (std::size_t j = 0; j < n; ++j) {
        if (one_hot[j] == 1) {
            if (target >= 0) throw ValidationError("weighted_ce_loss: target is not one-hot");
            target = static_cast<int>(j);
        } else if (one_hot[j] != 0) {
            throw ValidationError("weighted_ce_loss: target is not one-hot");
        }
    }
    if (target < 0) throw ValidationError("weighted_ce_loss: target is not one-hot");

    const double w = cw.weights[target];
    const double p = std::clamp(pred.probs[target], kProbFloor, 1.0);
    LossResult result;
    result.loss = -w * std::log(p);
    result.dlogits.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        result.dlogits[j] = w * (pred.probs[j] - (static_cast<int>(j) == target ? 1.0 : 0.0));
    return result;
}

LossResult bce_loss(const PredictionVector& pred, const std::vector<int>& multi_hot) {
    if (pred.mode != LabelMode::Multilabel)
        throw ValidationError("bce_loss: prediction is not multilabel");
    const std::size_t n = pred.probs.size();
    if (multi_hot.size() != n) throw ValidationError("bce_loss: target size mismatch");

    LossResult result;
    result.dlogits.resize(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (multi_hot[j] != 0 && multi_hot[j] != 1)
            throw ValidationError("bce_loss: target entries must be 0 or 1");
        const double p = std::clamp(pred.probs[j], kProbFloor, 1.0 - kProbFloor);
        const double y = static_cast<double>(multi_hot[j]);
        total += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
        result.dlogits[j] = (pred.probs[j] - y) / static_cast<double>(n);
    }
    result.loss = total / static_cast<double>(n);
    return result;
}

void backward(const ModelParams& params, const FeatureVector& x, const ForwardCache& cache,
              const std::vector<double>& dlogits, ParamGrads& grads) {
    const int L = params.label_count();
    for (int j = 0; j < L; ++j) grads.head.b[j] += dlogits[j];
    if (params.trunk) {
        const int H = params.hidden();
        for (int i = 0; i < H; ++i) {
            const double hi = cache.hidden[i];
            if (hi == 0.0) continue;
            double* row = grads.head.w.a.data() + static_cast<std::size_t>(i) * L;
            for (int j = 0; j < L; ++j) row[j] += hi * dlogits[j];
        }
        // through relu into the trunk
        std::vector<double> dhidden(H, 0.0);
        for (int i = 0; i < H; ++i) {
            if (cache.hidden_pre[i] <= 0.0) continue;
            const double* row = params.head.w.a.data() + static_cast<std::size_t>(i) * L;
            double s = 0.0;
            for (int j = 0; j < L; ++j) s += row[j] * dlogits[j];
            dhidden[i] = s;
        }
        for (int i = 0; i < H; ++i) grads.trunk->b[i] += dhidden[i];
        if (x.is_dense) {
            for (int r = 0; r < params.trunk->w.rows; ++r) {
                const double xr = x.dense[r];
                if (xr == 0.0) continue;
                double* row = grads.trunk->w.a.data() + static_cast<std::size_t>(r) * H;
                for (int i = 0; i < H; ++i) row[i] += xr * dhidden[i];
            }
        } else {
            for (const auto& [r, xr] : x.entries) {
                double* row = grads.trunk->w.a.data() + static_cast<std::size_t>(r) * H;
                for (int i = 0; i < H; ++i) row[i] += xr * dhidden[i];
            }
        }
    } else {
        if (x.is_dense) {
            for (int r = 0; r < params.head.w.rows; ++r) {
                const double xr = x.dense[r];
                if (xr == 0.0) continue;
                double* row = grads.head.w.a.data() + static_cast<std::size_t>(r) * L;
                for (int j = 0; j < L; ++j) row[j] += xr * dlogits[j];
            }
        } else {
            for (const auto& [r, xr] : x.entries) {
                double* row = grads.head.w.a.data() + static_cast<std::size_t>(r) * L;
                for (int j = 0; j < L; ++j) row[j] += xr * dlogits[j];
            }
        }
    }
}

void scale_grads(ParamGrads& grads, double factor) {
    if (grads.trunk) {
        for (double& v : grads.trunk->w.a) v *= factor;
        for (double& v : grads.trunk->b) v *= factor;
    }
    for (double& v : grads.head.w.a) v *= factor;
    for (double& v : grads.head.b) v *= factor;
}

int predict_multiclass(const PredictionVector& pred) {
    return static_cast<int>(std::max_element(pred.probs.begin(), pred.probs.end()) - pred.probs.begin());
}

std::vector<int> predict_multilabel(const PredictionVector& pred, double threshold, int none_idx) {
    std::vector<int> out;
    for (std::size_t j = 0; j < pred.probs.size(); ++j) {
        if (pred.probs[j] > threshold && static_cast<int>(j) != none_idx)
            out.push_back(static_cast<int>(j));
    }
    return out;
}

namespace {

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t trunk_digest(const ModelParams& params) {
    if (!params.trunk) return 0;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(params.trunk->w.a.data(), params.trunk->w.a.size() * sizeof(double), h);
    h = fnv1a(params.trunk->b.data(), params.trunk->b.size() * sizeof(double), h);
    return h;
}

ModelParams transfer_trunk(const ModelCheckpoint& source, int new_label_count, LabelMode new_mode,
                           std::uint64_t seed) {
    if (!source.params.trunk)
        throw ValidationError("transfer_trunk: source checkpoint has no trunk to share");
    ModelParams params = init_model(source.params.dim_in(), source.params.hidden(), new_label_count,
                                    new_mode, seed);
    params.trunk = source.params.trunk;  // exact copy
    return params;
}

}  // namespace imbtext
