#include "imbtext/folds.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "imbtext/error.hpp"
#include "imbtext/rng.hpp"

namespace imbtext {

namespace {

// Rarest positive label, ties to the lexicographically smallest. `labels`
// is sorted, so the first label with the minimum count wins.
std::string rarest_label(const std::vector<std::string>& labels, const LabelSpace& space) {
    std::string best;
    std::int64_t best_count = -1;
    for (const auto& l : labels) {
        const int idx = space.index_of(l);
        if (idx < 0) throw ValidationError("label '" + l + "' not in the label space");
        if (best_count < 0 || space.counts[idx] < best_count) {
            best = l;
            best_count = space.counts[idx];
        }
    }
    return best;
}

FoldPlan assign_stratified(const std::vector<std::pair<std::string, std::string>>& keyed_articles,
                           int k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("plan_folds: k must be at least 2");
    if (static_cast<int>(keyed_articles.size()) < k)
        throw ValidationError("plan_folds: k=" + std::to_string(k) + " exceeds the " +
                              std::to_string(keyed_articles.size()) + " labeled articles");

    std::map<std::string, std::vector<std::string>> groups;  // key -> ids, corpus order
    for (const auto& [id, key] : keyed_articles) groups[key].push_back(id);

    // Larger strata first so their remainders are spread before the small
    // ones fill the gaps; deterministic tie-break on the key.
    std::vector<const std::pair<const std::string, std::vector<std::string>>*> order;
    order.reserve(groups.size());
    for (const auto& g : groups) order.push_back(&g);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        if (a->second.size() != b->second.size()) return a->second.size() > b->second.size();
        return a->first < b->first;
    });

    Rng rng(seed);
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    std::vector<long> load(k, 0);
    for (const auto* group : order) {
        std::vector<std::string> members = group->second;
        rng.shuffle(members);

        const long m = static_cast<long>(members.size());
        const long base = m / k;
        const long extra = m % k;
        std::vector<long> quota(k, base);
        // Remainders go to the currently lightest folds; keeps the global
        // fold-size spread at most one throughout.
        std::vector<int> by_load(k);
        std::iota(by_load.begin(), by_load.end(), 0);
        std::stable_sort(by_load.begin(), by_load.end(),
                         [&](int a, int b) { return load[a] < load[b]; });
        for (long e = 0; e < extra; ++e) quota[by_load[e]]++;

        std::size_t next = 0;
        for (int f = 0; f < k; ++f) {
            for (long q = 0; q < quota[f]; ++q) plan.assignment[members[next++]] = f;
            load[f] += quota[f];
        }
    }
    return plan;
}

}  // namespace

int FoldPlan::fold_of(const std::string& article_id) const {
    const auto it = assignment.find(article_id);
    return it == assignment.end() ? -1 : it->second;
}

FoldPlan plan_folds(const Corpus& corpus, Task task, int k, std::uint64_t seed) {
    const LabelSpace space = build_label_space(corpus, task);
    for (std::size_t j = 0; j < space.counts.size(); ++j)
        if (space.counts[j] <= 0)
            throw ValidationError("plan_folds: class '" + space.labels[j] + "' has no samples");

    std::vector<std::pair<std::string, std::string>> keyed;
    for (const auto& doc : corpus.docs) {
        if (!doc.labeled_for(task)) continue;
        std::string key;
        switch (task) {
            case Task::T1:
                key = *doc.label_t1;
                break;
            case Task::T2:
                key = rarest_label(*doc.labels_t2, space);
                break;
            case Task::T3: {
                std::vector<std::string> all;
                for (const auto& para : doc.paragraphs)
                    if (para.labels_t3)
                        all.insert(all.end(), para.labels_t3->begin(), para.labels_t3->end());
                std::sort(all.begin(), all.end());
                all.erase(std::unique(all.begin(), all.end()), all.end());
                key = rarest_label(all, space);
                break;
            }
        }
        keyed.emplace_back(doc.id, std::move(key));
    }
    return assign_stratified(keyed, k, seed);
}

FoldPlan plan_shared_folds(const Corpus& corpus, int k, std::uint64_t seed) {
    const LabelSpace t2_space = build_label_space(corpus, Task::T2);
    const LabelSpace t3_space = build_label_space(corpus, Task::T3);

    std::vector<std::pair<std::string, std::string>> keyed;
    for (const auto& doc : corpus.docs) {
        std::string key;
        if (doc.label_t1) {
            key = "1:" + *doc.label_t1;
        } else if (doc.labels_t2) {
            key = "2:" + rarest_label(*doc.labels_t2, t2_space);
        } else if (doc.labeled_for(Task::T3)) {
            std::vector<std::string> all;
            for (const auto& para : doc.paragraphs)
                if (para.labels_t3)
                    all.insert(all.end(), para.labels_t3->begin(), para.labels_t3->end());
            std::sort(all.begin(), all.end());
            all.erase(std::unique(all.begin(), all.end()), all.end());
            key = "3:" + rarest_label(all, t3_space);
        } else {
            continue;  // unlabeled everywhere, no fold needed
        }
        keyed.emplace_back(doc.id, std::move(key));
    }
    return assign_stratified(keyed, k, seed);
}

nlohmann::ordered_json fold_plan_to_json(const FoldPlan& plan) {
    nlohmann::ordered_json j;
    j["k"] = plan.k;
    j["seed"] = plan.seed;
    nlohmann::ordered_json assign = nlohmann::ordered_json::object();
    for (const auto& [id, fold] : plan.assignment) assign[id] = fold;
    j["assignment"] = std::move(assign);
    return j;
}

FoldPlan fold_plan_from_json(const nlohmann::json& j) {
    FoldPlan plan;
    try {
        plan.k = j.at("k").get<int>();
        plan.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& [id, fold] : j.at("assignment").items()) {
            const int f = fold.get<int>();
            if (f < 0 || f >= plan.k) throw ValidationError("fold plan: fold index out of range for '" + id + "'");
            plan.assignment[id] = f;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("fold plan: ") + e.what());
    }
    return plan;
}

}  // namespace imbtext
