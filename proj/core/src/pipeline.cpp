#include "imbtext/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <set>

#include "imbtext/error.hpp"
#include "imbtext/imbalance.hpp"
#include "imbtext/rng.hpp"

namespace imbtext {

void TrainConfig::validate() const {
    if (epochs_max < 1) throw ConfigError("epochs_max: must be >= 1");
    if (patience < 0) throw ConfigError("patience: must be >= 0");
    if (patience > epochs_max) throw ConfigError("patience: must not exceed epochs_max");
    if (batch_size < 1) throw ConfigError("batch_size: must be >= 1");
    if (k < 2) throw ConfigError("k: must be >= 2");
    if (hidden < 0) throw ConfigError("hidden: must be >= 0");
    if (strategy == Strategy::Dependent && hidden == 0)
        throw ConfigError("hidden: the task-dependent strategy requires a trunk (hidden >= 1)");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold: must be in (0, 1)");
    if (!(val_frac >= 0.0 && val_frac < 1.0)) throw ConfigError("val_frac: must be in [0, 1)");
    if (!(sampler_epoch_multiplier > 0.0))
        throw ConfigError("sampler_epoch_multiplier: must be > 0");
    if (!(optim.lr > 0.0)) throw ConfigError("lr: must be > 0");
    if (optim.weight_decay < 0.0) throw ConfigError("weight_decay: must be >= 0");
}

FeatureFactory FeatureFactory::embeddings(std::shared_ptr<const EmbeddingTable> table) {
    if (!table) throw ValidationError("feature factory: null embedding table");
    FeatureFactory f;
    f.kind_ = FeatureSource::Embedding;
    f.table_ = std::move(table);
    return f;
}

FeatureFactory FeatureFactory::tfidf(TfidfConfig config) {
    FeatureFactory f;
    f.kind_ = FeatureSource::Tfidf;
    f.tfidf_config_ = config;
    return f;
}

FeatureFactory::FoldFeatures FeatureFactory::make(const std::vector<Unit>& units,
                                                  const std::vector<std::size_t>& train_idx) const {
    FoldFeatures out;
    if (kind_ == FeatureSource::Embedding) {
        out.dim = table_->dim();
        out.x.reserve(units.size());
        for (const auto& u : units) out.x.push_back(table_->get(u.unit_id));
        return out;
    }
    std::vector<std::vector<std::string>> train_tokens;
    train_tokens.reserve(train_idx.size());
    for (std::size_t i : train_idx) train_tokens.push_back(units[i].tokens());
    TfidfModel model = TfidfModel::fit(train_tokens, tfidf_config_);
    out.dim = model.dim();
    out.x.reserve(units.size());
    for (const auto& u : units) out.x.push_back(model.transform(u.tokens()));
    out.model = std::move(model);
    return out;
}

TaskData TaskData::build(const Corpus& corpus, Task task) {
    TaskData data;
    data.task = task;
    data.space = build_label_space(corpus, task);
    if (data.space.labels.empty())
        throw ValidationError("no units labeled for task " + to_string(task));
    data.units = collect_units(corpus, task, data.space);
    data.none_idx = data.space.mode == LabelMode::Multilabel ? data.space.index_of(kNoneLabel) : -1;
    return data;
}

namespace {

std::vector<std::int64_t> split_counts(const TaskData& data, const std::vector<std::size_t>& idx) {
    std::vector<std::int64_t> counts(data.space.labels.size(), 0);
    for (std::size_t i : idx)
        for (int l : data.units[i].labels) counts[l]++;
    return counts;
}

std::vector<int> one_hot(const Unit& u, int label_count) {
    std::vector<int> y(label_count, 0);
    y[u.labels[0]] = 1;
    return y;
}

std::vector<int> multi_hot(const Unit& u, int label_count) {
    std::vector<int> y(label_count, 0);
    for (int l : u.labels) y[l] = 1;
    return y;
}

struct SplitEval {
    double score = 0.0;
    std::vector<int> mc_preds;               // multiclass
    std::vector<std::vector<int>> ml_preds;  // multilabel (None already removed)
};

SplitEval evaluate_split(const ModelParams& params, const TaskData& data,
                         const std::vector<FeatureVector>& x, const std::vector<std::size_t>& idx,
                         double threshold, const WarnFn& warn) {
    SplitEval ev;
    const int L = data.space.size();
    if (data.space.mode == LabelMode::Multiclass) {
        std::vector<int> golds;
        golds.reserve(idx.size());
        ev.mc_preds.reserve(idx.size());
        for (std::size_t i : idx) {
            ev.mc_preds.push_back(predict_multiclass(forward(params, x[i])));
            golds.push_back(data.units[i].labels[0]);
        }
        ev.score = macro_f1(ev.mc_preds, golds, L, warn);
    } else {
        std::vector<std::vector<int>> golds;
        golds.reserve(idx.size());
        ev.ml_preds.reserve(idx.size());
        for (std::size_t i : idx) {
            ev.ml_preds.push_back(predict_multilabel(forward(params, x[i]), threshold, data.none_idx));
            golds.push_back(data.units[i].labels);
        }
        ev.score = micro_f1(ev.ml_preds, strip_label(golds, data.none_idx));
    }
    return ev;
}

}  // namespace

FoldResult train_fold(const TaskData& data, const FoldPlan& plan, int fold,
                      const FeatureFactory& features, const TrainConfig& config,
                      const ModelParams* initial) {
    config.validate();
    const bool multiclass = data.space.mode == LabelMode::Multiclass;
    const int L = data.space.size();

    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> eval_idx;
    for (std::size_t i = 0; i < data.units.size(); ++i) {
        const int f = plan.fold_of(data.units[i].article_id());
        if (f < 0) continue;  // article not in the plan
        (f == fold ? eval_idx : train_idx).push_back(i);
    }
    if (train_idx.empty() || eval_idx.empty())
        throw ValidationError("train_fold: fold " + std::to_string(fold) + " of task " +
                              to_string(data.task) + " has an empty split");

    // The under-sampling path: majority classes trimmed to the minority count
    // before anything else sees the training split. Multiclass only.
    if (config.toggles.undersample && multiclass) {
        std::vector<int> labels;
        labels.reserve(train_idx.size());
        for (std::size_t i : train_idx) labels.push_back(data.units[i].labels[0]);
        const auto kept = undersample(labels, data.space.mode, mix_seed(config.seeds.folds, 0x7500 + fold));
        std::vector<std::size_t> reduced;
        reduced.reserve(kept.size());
        for (std::size_t pos : kept) reduced.push_back(train_idx[pos]);
        train_idx = std::move(reduced);
    }

    // Early stopping monitors the held-out fold unless an inner validation
    // split is carved out of the training data.
    std::vector<std::size_t> monitor_idx = eval_idx;
    if (config.val_frac > 0.0) {
        Rng rng(mix_seed(config.seeds.folds, 0x1000 + fold));
        std::vector<std::size_t> shuffled = train_idx;
        rng.shuffle(shuffled);
        auto n_val = static_cast<std::size_t>(
            std::round(config.val_frac * static_cast<double>(shuffled.size())));
        n_val = std::clamp<std::size_t>(n_val, 1, shuffled.size() - 1);
        monitor_idx.assign(shuffled.begin(), shuffled.begin() + n_val);
        train_idx.assign(shuffled.begin() + n_val, shuffled.end());
    }

    auto ff = features.make(data.units, train_idx);

    const auto counts = split_counts(data, train_idx);
    ClassWeights cw;
    cw.task = data.task;
    if (multiclass && config.toggles.class_weights) {
        cw = class_weights(counts, data.task);
    } else {
        cw.weights.assign(L, 1.0);  // class weights are multiclass-only (n/a otherwise)
    }

    ModelParams params;
    if (initial) {
        if (initial->dim_in() != ff.dim)
            throw ValidationError("train_fold: initial parameters expect dim " +
                                  std::to_string(initial->dim_in()) + ", features have " +
                                  std::to_string(ff.dim));
        params = *initial;
    } else {
        params = init_model(ff.dim, config.hidden, L, data.space.mode, config.seeds.init + fold);
    }
    const std::uint64_t init_digest = trunk_digest(params);
    OptimizerState opt = init_optimizer(params, config.optim);

    std::optional<BatchStream> stream;
    std::optional<Rng> shuffle_rng;
    if (config.toggles.sample_weights) {
        std::vector<std::vector<int>> train_labels;
        train_labels.reserve(train_idx.size());
        for (std::size_t i : train_idx) train_labels.push_back(data.units[i].labels);
        const SampleWeights sw = sample_weights(train_labels, data.space, counts);
        stream.emplace(sw, config.batch_size, config.seeds.sampler + fold,
                       config.sampler_epoch_multiplier);
    } else {
        shuffle_rng.emplace(config.seeds.sampler + fold);
    }

    FoldResult result;
    double best_score = -1.0;
    ModelParams best_params = params;
    int best_epoch = 0;
    int non_improve = 0;
    ForwardCache cache;

    for (int epoch = 0; epoch < config.epochs_max; ++epoch) {
        std::vector<std::vector<int>> batches;
        if (stream) {
            batches = stream->next_epoch();
        } else {
            std::vector<int> order(train_idx.size());
            std::iota(order.begin(), order.end(), 0);
            shuffle_rng->shuffle(order);
            for (std::size_t s = 0; s < order.size(); s += config.batch_size) {
                const std::size_t e = std::min(order.size(), s + config.batch_size);
                batches.emplace_back(order.begin() + s, order.begin() + e);
            }
        }

        for (std::size_t bi = 0; bi < batches.size(); ++bi) {
            ParamGrads grads = zero_grads(params);
            for (int pos : batches[bi]) {
                const std::size_t i = train_idx[static_cast<std::size_t>(pos)];
                const Unit& u = data.units[i];
                const PredictionVector pred = forward_cached(params, ff.x[i], cache);
                LossResult lr = multiclass ? weighted_ce_loss(pred, one_hot(u, L), cw)
                                           : bce_loss(pred, multi_hot(u, L));
                if (!std::isfinite(lr.loss))
                    throw Error("train_fold: non-finite loss at epoch " + std::to_string(epoch) +
                                ", batch " + std::to_string(bi));
                backward(params, ff.x[i], cache, lr.dlogits, grads);
            }
            scale_grads(grads, 1.0 / static_cast<double>(batches[bi].size()));
            grad_step(params, grads, opt);
        }

        const double score =
            evaluate_split(params, data, ff.x, monitor_idx, config.threshold, nullptr).score;
        result.epoch_scores.push_back(score);
        if (score > best_score) {
            best_score = score;
            best_params = params;
            best_epoch = epoch;
            non_improve = 0;
        } else {
            non_improve++;
        }
        if (non_improve >= config.patience) break;
    }

    std::set<std::string> warned;
    const WarnFn warn = [&](const std::string& msg) {
        if (warned.insert(msg).second)
            std::cerr << "[" << to_string(data.task) << " fold " << fold << "] " << msg << "\n";
    };
    const SplitEval final_eval =
        evaluate_split(best_params, data, ff.x, eval_idx, config.threshold, warn);

    result.ckpt.params = std::move(best_params);
    result.ckpt.prov =
        Provenance{data.task, fold, best_epoch, best_score, init_digest};
    result.ckpt.labels = data.space.labels;
    result.summary.fold = fold;
    result.summary.score = final_eval.score;
    result.summary.val_score = best_score;
    result.summary.best_epoch = best_epoch;
    result.summary.epochs_trained = static_cast<int>(result.epoch_scores.size());
    if (multiclass) {
        std::vector<int> golds;
        golds.reserve(eval_idx.size());
        for (std::size_t i : eval_idx) golds.push_back(data.units[i].labels[0]);
        result.summary.confusion = confusion_matrix(final_eval.mc_preds, golds, L);
    }
    result.tfidf = std::move(ff.model);
    result.eval_idx = std::move(eval_idx);
    result.eval_mc_preds = std::move(final_eval.mc_preds);
    result.eval_ml_preds = std::move(final_eval.ml_preds);
    return result;
}

CvRun run_cv(const TaskData& data, const FoldPlan& plan, const FeatureFactory& features,
             const TrainConfig& config, const std::vector<ModelParams>* initial_per_fold) {
    if (initial_per_fold && static_cast<int>(initial_per_fold->size()) != plan.k)
        throw ValidationError("run_cv: initial parameter list does not match the fold count");

    CvRun run;
    run.report.task = data.task;
    run.report.metric = data.space.mode == LabelMode::Multiclass ? "macro_f1" : "micro_f1";
    run.report.k = plan.k;
    run.report.labels = data.space.labels;

    // For the per-language breakdown every unit is scored exactly once, by
    // the fold that held it out.
    struct LangPool {
        std::vector<int> mc_preds, mc_golds;
        std::vector<std::vector<int>> ml_preds, ml_golds;
    };
    std::map<std::string, LangPool> pools;

    double total = 0.0;
    for (int fold = 0; fold < plan.k; ++fold) {
        FoldResult fr = train_fold(data, plan, fold, features, config,
                                   initial_per_fold ? &(*initial_per_fold)[fold] : nullptr);
        if (config.by_language) {
            for (std::size_t p = 0; p < fr.eval_idx.size(); ++p) {
                const Unit& u = data.units[fr.eval_idx[p]];
                LangPool& pool = pools[u.language()];
                if (data.space.mode == LabelMode::Multiclass) {
                    pool.mc_preds.push_back(fr.eval_mc_preds[p]);
                    pool.mc_golds.push_back(u.labels[0]);
                } else {
                    pool.ml_preds.push_back(fr.eval_ml_preds[p]);
                    pool.ml_golds.push_back(u.labels);
                }
            }
        }
        total += fr.summary.score;
        run.report.folds.push_back(fr.summary);
        run.checkpoints.push_back(std::move(fr.ckpt));
        run.fold_tfidf.push_back(std::move(fr.tfidf));
    }
    run.report.mean = total / static_cast<double>(plan.k);
    for (auto& [lang, pool] : pools) {
        if (data.space.mode == LabelMode::Multiclass)
            run.report.by_language[lang] = macro_f1(pool.mc_preds, pool.mc_golds, data.space.size());
        else
            run.report.by_language[lang] = micro_f1(pool.ml_preds, strip_label(pool.ml_golds, data.none_idx));
    }
    return run;
}

MultiTaskRun run_strategy(const Corpus& corpus, const std::vector<Task>& tasks, const FoldPlan& plan,
                          const FeatureFactory& features, const TrainConfig& config) {
    config.validate();
    std::vector<Task> order = tasks;
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    if (order.empty()) throw ConfigError("tasks: at least one task is required");

    MultiTaskRun out;
    out.tasks = order;
    const CvRun* prev = nullptr;
    for (Task task : order) {
        TaskData data = TaskData::build(corpus, task);
        if (config.strategy == Strategy::Dependent && prev) {
            std::vector<ModelParams> initial;
            initial.reserve(plan.k);
            for (int fold = 0; fold < plan.k; ++fold)
                initial.push_back(transfer_trunk(prev->checkpoints[fold], data.space.size(),
                                                 data.space.mode, config.seeds.init + fold));
            out.runs.emplace(task, run_cv(data, plan, features, config, &initial));
        } else {
            out.runs.emplace(task, run_cv(data, plan, features, config));
        }
        prev = &out.runs.at(task);
    }
    return out;
}

std::vector<int> select_top_k(const std::vector<double>& fold_scores, int k) {
    if (static_cast<int>(fold_scores.size()) < k)
        throw ValidationError("select_top_k: need at least " + std::to_string(k) + " scored folds, have " +
                              std::to_string(fold_scores.size()));
    std::vector<int> idx(fold_scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (fold_scores[a] != fold_scores[b]) return fold_scores[a] > fold_scores[b];
        return a < b;
    });
    idx.resize(k);
    return idx;
}

EnsemblePrediction ensemble_predict(const std::array<const ModelCheckpoint*, 3>& models,
                                    const std::array<const FeatureVector*, 3>& xs, double threshold,
                                    int none_idx) {
    for (const auto* m : models)
        if (!m) throw ValidationError("ensemble_predict: null checkpoint");
    const LabelMode mode = models[0]->params.mode;
    const int L = models[0]->params.label_count();
    for (const auto* m : models) {
        if (m->params.mode != mode) throw ValidationError("ensemble_predict: mode mismatch");
        if (m->params.label_count() != L)
            throw ValidationError("ensemble_predict: label count mismatch");
        if (m->prov.task != models[0]->prov.task)
            throw ValidationError("ensemble_predict: task mismatch");
    }

    EnsemblePrediction out;
    out.mode = mode;
    out.mean_probs.assign(L, 0.0);
    std::array<PredictionVector, 3> preds;
    for (int i = 0; i < 3; ++i) {
        preds[i] = forward(models[i]->params, *xs[i]);
        for (int j = 0; j < L; ++j) out.mean_probs[j] += preds[i].probs[j] / 3.0;
    }

    if (mode == LabelMode::Multiclass) {
        const std::array<int, 3> votes = {predict_multiclass(preds[0]), predict_multiclass(preds[1]),
                                          predict_multiclass(preds[2])};
        if (votes[0] == votes[1] || votes[0] == votes[2]) {
            out.label = votes[0];
        } else if (votes[1] == votes[2]) {
            out.label = votes[1];
        } else {
            // full disagreement: highest mean probability
            out.label = static_cast<int>(
                std::max_element(out.mean_probs.begin(), out.mean_probs.end()) - out.mean_probs.begin());
        }
    } else {
        std::vector<int> counts(L, 0);
        for (int i = 0; i < 3; ++i)
            for (int l : predict_multilabel(preds[i], threshold, none_idx)) counts[l]++;
        for (int j = 0; j < L; ++j)
            if (counts[j] >= 2) out.labels.push_back(j);
    }
    return out;
}

AblationReport run_ablation(const Corpus& corpus, const std::vector<Task>& tasks, const FoldPlan& plan,
                            const FeatureFactory& features, const TrainConfig& full_config) {
    TrainConfig full = full_config;
    full.toggles.class_weights = true;
    full.toggles.sample_weights = true;
    full.strategy = Strategy::Dependent;
    full.validate();

    std::vector<Task> order = tasks;
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());

    std::vector<Task> multiclass_tasks;
    for (Task t : order)
        if (mode_of(t) == LabelMode::Multiclass) multiclass_tasks.push_back(t);

    AblationReport report;
    report.tasks = order;

    const auto run_variant = [&](const std::string& name, TrainConfig cfg,
                                 const std::vector<Task>& variant_tasks) {
        std::map<Task, std::optional<CvReport>> row;
        for (Task t : order) row[t] = std::nullopt;
        if (!variant_tasks.empty()) {
            MultiTaskRun r = run_strategy(corpus, variant_tasks, plan, features, cfg);
            for (Task t : variant_tasks) row[t] = std::move(r.runs.at(t).report);
        }
        report.variants.emplace_back(name, std::move(row));
    };

    run_variant("full", full, order);

    TrainConfig wo_cw = full;
    wo_cw.toggles.class_weights = false;
    // class weights only exist for multiclass tasks; the other cells are n/a
    run_variant("wo_cw", wo_cw, multiclass_tasks);

    TrainConfig wo_sw = full;
    wo_sw.toggles.sample_weights = false;
    run_variant("wo_sw", wo_sw, order);

    TrainConfig wo_td = full;
    wo_td.strategy = Strategy::Agnostic;
    run_variant("wo_td", wo_td, order);

    return report;
}

}  // namespace imbtext
