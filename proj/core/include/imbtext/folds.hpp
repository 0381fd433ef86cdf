#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "imbtext/corpus.hpp"
#include "imbtext/task.hpp"

namespace imbtext {

// Deterministic article-id -> fold-index map. Paragraphs always inherit
// their article's fold, so no article is split across folds.
struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::map<std::string, int> assignment;

    // -1 when the article is not part of the plan.
    int fold_of(const std::string& article_id) const;
};

// Stratified k-fold assignment over the articles labeled for `task`.
// T1 stratifies by genre; T2/T3 by the article's rarest positive label
// (ties broken by the lexicographically smallest label). Fold sizes differ
// by at most one, globally and within every stratum.
FoldPlan plan_folds(const Corpus& corpus, Task task, int k, std::uint64_t seed);

// One plan covering every article labeled for at least one task, so that the
// same folds can be reused across tasks and fine-tuning strategies. Articles
// are stratified by their T1 genre when present, otherwise by their rarest
// T2 label, otherwise by their rarest T3 label.
FoldPlan plan_shared_folds(const Corpus& corpus, int k, std::uint64_t seed);

nlohmann::ordered_json fold_plan_to_json(const FoldPlan& plan);
FoldPlan fold_plan_from_json(const nlohmann::json& j);

}  // namespace imbtext
