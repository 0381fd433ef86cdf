#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace imbtext {

using WarnFn = std::function<void(const std::string&)>;

// Unweighted mean of per-class F1 over all `label_count` classes (the T1
// metric). A class absent from both preds and golds contributes F1 = 0 and
// triggers a warning.
double macro_f1(const std::vector<int>& preds, const std::vector<int>& golds, int label_count,
                const WarnFn& warn = nullptr);

// F1 from TP/FP/FN pooled over all (unit, label) pairs (the T2/T3 metric).
// Callers strip the synthetic None label from both sides beforehand;
// empty-vs-empty units contribute nothing.
double micro_f1(const std::vector<std::vector<int>>& pred_sets,
                const std::vector<std::vector<int>>& gold_sets);

// matrix[gold][pred] counts; row sums are the per-class gold counts.
std::vector<std::vector<std::int64_t>> confusion_matrix(const std::vector<int>& preds,
                                                        const std::vector<int>& golds, int label_count);

// Removes `none_idx` from every label set (gold side of micro-F1).
std::vector<std::vector<int>> strip_label(const std::vector<std::vector<int>>& sets, int none_idx);

}  // namespace imbtext
