#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imbtext/corpus.hpp"
#include "imbtext/features.hpp"
#include "imbtext/folds.hpp"
#include "imbtext/metrics.hpp"
#include "imbtext/model.hpp"
#include "imbtext/optimizer.hpp"

namespace imbtext {

enum class Strategy { Agnostic, Dependent };

inline std::string to_string(Strategy s) { return s == Strategy::Agnostic ? "agnostic" : "dependent"; }

struct Toggles {
    bool class_weights = true;   // Eq.-1 weighted loss (multiclass tasks only)
    bool sample_weights = true;  // weighted random batch sampler
    bool undersample = false;    // down-sample majority classes (multiclass)
};

struct Seeds {
    std::uint64_t folds = 42;
    std::uint64_t init = 43;
    std::uint64_t sampler = 44;
};

struct TrainConfig {
    int epochs_max = 30;
    int patience = 5;
    int batch_size = 16;
    int k = 10;
    Strategy strategy = Strategy::Dependent;
    Toggles toggles;
    Seeds seeds;
    AdamWConfig optim;
    int hidden = 128;  // trunk width; 0 = head directly on the features
    double threshold = 0.5;
    double val_frac = 0.0;  // 0: early-stop on the held-out fold itself
    double sampler_epoch_multiplier = 1.0;
    bool by_language = false;

    void validate() const;  // throws ConfigError, message names the field
};

// Feature source for a run: one embedding table shared by every fold, or
// TF-IDF refit on each fold's training split.
class FeatureFactory {
public:
    static FeatureFactory embeddings(std::shared_ptr<const EmbeddingTable> table);
    static FeatureFactory tfidf(TfidfConfig config);

    bool is_tfidf() const { return kind_ == FeatureSource::Tfidf; }

    struct FoldFeatures {
        std::vector<FeatureVector> x;     // aligned with the unit vector
        std::optional<TfidfModel> model;  // present on the tfidf path
        int dim = 0;
    };

    // `train_idx` are the indices the featurizer may be fitted on.
    FoldFeatures make(const std::vector<Unit>& units, const std::vector<std::size_t>& train_idx) const;

private:
    FeatureFactory() = default;
    FeatureSource kind_ = FeatureSource::Embedding;
    std::shared_ptr<const EmbeddingTable> table_;
    TfidfConfig tfidf_config_;
};

struct FoldSummary {
    int fold = 0;
    double score = 0.0;      // task metric on the held-out fold, best params
    double val_score = 0.0;  // monitored score of the best epoch
    int best_epoch = 0;
    int epochs_trained = 0;
    std::vector<std::vector<std::int64_t>> confusion;  // multiclass only
};

struct CvReport {
    Task task = Task::T1;
    std::string metric;  // "macro_f1" or "micro_f1"
    int k = 0;
    std::vector<std::string> labels;
    std::vector<FoldSummary> folds;
    double mean = 0.0;
    std::map<std::string, double> by_language;  // pooled eval predictions per language
};

struct FoldResult {
    ModelCheckpoint ckpt;
    std::vector<double> epoch_scores;  // monitored metric after each epoch
    FoldSummary summary;
    std::optional<TfidfModel> tfidf;
    // predictions of the best checkpoint on the held-out fold, unit-aligned
    std::vector<std::size_t> eval_idx;
    std::vector<int> eval_mc_preds;               // multiclass
    std::vector<std::vector<int>> eval_ml_preds;  // multilabel
};

struct CvRun {
    CvReport report;
    std::vector<ModelCheckpoint> checkpoints;           // fold order
    std::vector<std::optional<TfidfModel>> fold_tfidf;  // fold order
};

struct TaskData {
    Task task = Task::T1;
    LabelSpace space;
    std::vector<Unit> units;
    int none_idx = -1;  // index of the synthetic None label, when present

    static TaskData build(const Corpus& corpus, Task task);
};

// Trains one fold: class/sample weights and the featurizer come from the
// training split only; early stopping monitors the held-out fold (or an
// inner validation split when val_frac > 0) and keeps the best epoch.
FoldResult train_fold(const TaskData& data, const FoldPlan& plan, int fold,
                      const FeatureFactory& features, const TrainConfig& config,
                      const ModelParams* initial = nullptr);

// k train_fold runs; fold i evaluates on fold i. `initial_per_fold`, when
// given, seeds each fold's model (task-dependent chaining).
CvRun run_cv(const TaskData& data, const FoldPlan& plan, const FeatureFactory& features,
             const TrainConfig& config, const std::vector<ModelParams>* initial_per_fold = nullptr);

struct MultiTaskRun {
    std::vector<Task> tasks;
    std::map<Task, CvRun> runs;
};

// Agnostic: independent run_cv per task. Dependent: tasks in T1->T2->T3
// order; within each fold the trunk of task t's best checkpoint seeds task
// t+1 via transfer_trunk. One fold plan for everything.
MultiTaskRun run_strategy(const Corpus& corpus, const std::vector<Task>& tasks, const FoldPlan& plan,
                          const FeatureFactory& features, const TrainConfig& config);

// Fold indices of the k highest validation scores; ties resolved toward the
// lower fold index. Fewer than k scores is an error.
std::vector<int> select_top_k(const std::vector<double>& fold_scores, int k = 3);

struct EnsemblePrediction {
    LabelMode mode = LabelMode::Multiclass;
    int label = -1;            // multiclass
    std::vector<int> labels;   // multilabel
    std::vector<double> mean_probs;
};

// Majority vote over exactly three models. Multiclass: a label predicted by
// at least two wins; full disagreement falls back to the highest mean
// probability. Multilabel: per-label vote, kept when at least two agree.
// xs[i] is the unit's feature vector for model i (TF-IDF vocabularies are
// per fold, so inputs may differ per model).
EnsemblePrediction ensemble_predict(const std::array<const ModelCheckpoint*, 3>& models,
                                    const std::array<const FeatureVector*, 3>& xs, double threshold,
                                    int none_idx = -1);

struct AblationReport {
    std::vector<Task> tasks;
    // variant name -> per-task report; n/a cells are absent optionals
    std::vector<std::pair<std::string, std::map<Task, std::optional<CvReport>>>> variants;
};

// Table-5-style grid: full, w/o cw (multiclass tasks only), w/o sw, w/o td,
// all sharing the given fold plan and the config's seeds.
AblationReport run_ablation(const Corpus& corpus, const std::vector<Task>& tasks, const FoldPlan& plan,
                            const FeatureFactory& features, const TrainConfig& full_config);

}  // namespace imbtext
