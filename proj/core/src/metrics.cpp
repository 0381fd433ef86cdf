#include "imbtext/metrics.hpp"

#include <algorithm>

#include "imbtext/error.hpp"

namespace imbtext {

double macro_f1(const std::vector<int>& preds, const std::vector<int>& golds, int label_count,
                const WarnFn& warn) {
    if (preds.size() != golds.size()) throw ValidationError("macro_f1: preds/golds length mismatch");
    if (label_count < 1) throw ValidationError("macro_f1: label_count must be positive");

    std::vector<std::int64_t> tp(label_count, 0), fp(label_count, 0), fn(label_count, 0);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int p = preds[i];
        const int g = golds[i];
        if (p < 0 || p >= label_count || g < 0 || g >= label_count)
            throw ValidationError("macro_f1: label index out of range");
        if (p == g) {
            tp[p]++;
        } else {
            fp[p]++;
            fn[g]++;
        }
    }

    double total = 0.0;
    for (int c = 0; c < label_count; ++c) {
        const std::int64_t denom = 2 * tp[c] + fp[c] + fn[c];
        if (denom == 0) {
            if (warn)
                warn("macro_f1: class " + std::to_string(c) +
                     " absent from both predictions and golds; scored as F1=0");
            continue;  // contributes 0
        }
        total += 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom);
    }
    return total / static_cast<double>(label_count);
}

double micro_f1(const std::vector<std::vector<int>>& pred_sets,
                const std::vector<std::vector<int>>& gold_sets) {
    if (pred_sets.size() != gold_sets.size())
        throw ValidationError("micro_f1: preds/golds length mismatch");

    std::int64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred_sets.size(); ++i) {
        std::vector<int> p = pred_sets[i];
        std::vector<int> g = gold_sets[i];
        std::sort(p.begin(), p.end());
        std::sort(g.begin(), g.end());
        std::size_t a = 0, b = 0;
        while (a < p.size() && b < g.size()) {
            if (p[a] == g[b]) {
                tp++;
                a++;
                b++;
            } else if (p[a] < g[b]) {
                fp++;
                a++;
            } else {
                fn++;
                b++;
            }
        }
        fp += static_cast<std::int64_t>(p.size() - a);
        fn += static_cast<std::int64_t>(g.size() - b);
    }
    const std::int64_t denom = 2 * tp + fp + fn;
    if (denom == 0) return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

std::vector<std::vector<std::int64_t>> confusion_matrix(const std::vector<int>& preds,
                                                        const std::vector<int>& golds, int label_count) {
    if (preds.size() != golds.size())
        throw ValidationError("confusion_matrix: preds/golds length mismatch");
    std::vector<std::vector<std::int64_t>> m(label_count, std::vector<std::int64_t>(label_count, 0));
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int p = preds[i];
        const int g = golds[i];
        if (p < 0 || p >= label_count || g < 0 || g >= label_count)
            throw ValidationError("confusion_matrix: unknown label index");
        m[g][p]++;
    }
    return m;
}

std::vector<std::vector<int>> strip_label(const std::vector<std::vector<int>>& sets, int none_idx) {
    if (none_idx < 0) return sets;
    std::vector<std::vector<int>> out;
    out.reserve(sets.size());
    for (const auto& s : sets) {
        std::vector<int> kept;
        kept.reserve(s.size());
        for (int l : s)
            if (l != none_idx) kept.push_back(l);
        out.push_back(std::move(kept));
    }
    return out;
}

}  // namespace imbtext
