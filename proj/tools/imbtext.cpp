// imbtext command-line interface: stats | folds | train | ablate | predict | synth

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "imbtext/checkpoint.hpp"
#include "imbtext/corpus.hpp"
#include "imbtext/error.hpp"
#include "imbtext/folds.hpp"
#include "imbtext/pipeline.hpp"
#include "imbtext/report.hpp"
#include "imbtext/synth.hpp"

namespace fs = std::filesystem;
using imbtext::ConfigError;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Fully materialized run configuration. Precedence: command-line flags, then
// the IMB_SEED environment variable (seed only), then the --config file, then
// these defaults. The resolved form is echoed into the output directory.
struct RunConfig {
    std::string corpus;
    std::vector<std::string> extra_corpus;
    std::vector<std::string> tasks = {"T1", "T2", "T3"};
    std::string features = "tfidf";  // "tfidf" or "embeddings:PATH"
    std::string strategy = "dependent";
    bool class_weights = true;
    bool sample_weights = true;
    bool undersample = false;
    int k = 10;
    int epochs_max = 30;
    int patience = 5;
    int batch_size = 16;
    int hidden = 128;
    int max_tokens = 512;
    int min_df = 1;
    double lr = 3e-5;
    double weight_decay = 0.01;
    double threshold = 0.5;
    double val_frac = 0.0;
    double sampler_epoch_multiplier = 1.0;
    std::uint64_t seed_base = 42;
    std::optional<std::uint64_t> seed_folds, seed_init, seed_sampler;
    bool by_language = false;
    std::string out = "run_out";
};

bool parse_on_off(const std::string& v, const std::string& flag) {
    if (v == "on") return true;
    if (v == "off") return false;
    throw ConfigError(flag + ": expected 'on' or 'off', got '" + v + "'");
}

void apply_config_json(RunConfig& cfg, const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        try {
            if (key == "corpus") cfg.corpus = v.get<std::string>();
            else if (key == "extra_corpus") cfg.extra_corpus = v.get<std::vector<std::string>>();
            else if (key == "tasks") cfg.tasks = v.get<std::vector<std::string>>();
            else if (key == "features") cfg.features = v.get<std::string>();
            else if (key == "strategy") cfg.strategy = v.get<std::string>();
            else if (key == "class_weights") cfg.class_weights = v.get<bool>();
            else if (key == "sample_weights") cfg.sample_weights = v.get<bool>();
            else if (key == "undersample") cfg.undersample = v.get<bool>();
            else if (key == "k") cfg.k = v.get<int>();
            else if (key == "epochs_max") cfg.epochs_max = v.get<int>();
            else if (key == "patience") cfg.patience = v.get<int>();
            else if (key == "batch_size") cfg.batch_size = v.get<int>();
            else if (key == "hidden") cfg.hidden = v.get<int>();
            else if (key == "max_tokens") cfg.max_tokens = v.get<int>();
            else if (key == "min_df") cfg.min_df = v.get<int>();
            else if (key == "lr") cfg.lr = v.get<double>();
            else if (key == "weight_decay") cfg.weight_decay = v.get<double>();
            else if (key == "threshold") cfg.threshold = v.get<double>();
            else if (key == "val_frac") cfg.val_frac = v.get<double>();
            else if (key == "sampler_epoch_multiplier") cfg.sampler_epoch_multiplier = v.get<double>();
            else if (key == "seed_base") cfg.seed_base = v.get<std::uint64_t>();
            else if (key == "by_language") cfg.by_language = v.get<bool>();
            else if (key == "out") cfg.out = v.get<std::string>();
            else if (key == "seeds") {
                for (auto st = v.begin(); st != v.end(); ++st) {
                    if (st.key() == "folds") cfg.seed_folds = st.value().get<std::uint64_t>();
                    else if (st.key() == "init") cfg.seed_init = st.value().get<std::uint64_t>();
                    else if (st.key() == "sampler") cfg.seed_sampler = st.value().get<std::uint64_t>();
                    else throw ConfigError("config: unknown field 'seeds." + st.key() + "'");
                }
            } else {
                throw ConfigError("config: unknown field '" + key + "'");
            }
        } catch (const json::exception&) {
            throw ConfigError("config: field '" + key + "' has the wrong type");
        }
    }
}

imbtext::Seeds resolve_seeds(const RunConfig& cfg) {
    imbtext::Seeds s;
    s.folds = cfg.seed_folds.value_or(cfg.seed_base);
    s.init = cfg.seed_init.value_or(cfg.seed_base + 1);
    s.sampler = cfg.seed_sampler.value_or(cfg.seed_base + 2);
    return s;
}

imbtext::TrainConfig to_train_config(const RunConfig& cfg) {
    imbtext::TrainConfig tc;
    tc.epochs_max = cfg.epochs_max;
    tc.patience = cfg.patience;
    tc.batch_size = cfg.batch_size;
    tc.k = cfg.k;
    if (cfg.strategy == "agnostic") tc.strategy = imbtext::Strategy::Agnostic;
    else if (cfg.strategy == "dependent") tc.strategy = imbtext::Strategy::Dependent;
    else throw ConfigError("strategy: expected 'agnostic' or 'dependent', got '" + cfg.strategy + "'");
    tc.toggles.class_weights = cfg.class_weights;
    tc.toggles.sample_weights = cfg.sample_weights;
    tc.toggles.undersample = cfg.undersample;
    tc.seeds = resolve_seeds(cfg);
    tc.optim.lr = cfg.lr;
    tc.optim.weight_decay = cfg.weight_decay;
    tc.hidden = cfg.hidden;
    tc.threshold = cfg.threshold;
    tc.val_frac = cfg.val_frac;
    tc.sampler_epoch_multiplier = cfg.sampler_epoch_multiplier;
    tc.by_language = cfg.by_language;
    tc.validate();
    return tc;
}

ordered_json resolved_config_json(const RunConfig& cfg) {
    const imbtext::Seeds seeds = resolve_seeds(cfg);
    ordered_json j;
    j["corpus"] = cfg.corpus;
    j["extra_corpus"] = cfg.extra_corpus;
    j["tasks"] = cfg.tasks;
    j["features"] = cfg.features;
    j["strategy"] = cfg.strategy;
    j["class_weights"] = cfg.class_weights;
    j["sample_weights"] = cfg.sample_weights;
    j["undersample"] = cfg.undersample;
    j["k"] = cfg.k;
    j["epochs_max"] = cfg.epochs_max;
    j["patience"] = cfg.patience;
    j["batch_size"] = cfg.batch_size;
    j["hidden"] = cfg.hidden;
    j["max_tokens"] = cfg.max_tokens;
    j["min_df"] = cfg.min_df;
    j["lr"] = cfg.lr;
    j["weight_decay"] = cfg.weight_decay;
    j["threshold"] = cfg.threshold;
    j["val_frac"] = cfg.val_frac;
    j["sampler_epoch_multiplier"] = cfg.sampler_epoch_multiplier;
    j["seed_base"] = cfg.seed_base;
    j["seeds"] = {{"folds", seeds.folds}, {"init", seeds.init}, {"sampler", seeds.sampler}};
    j["by_language"] = cfg.by_language;
    j["out"] = cfg.out;
    return j;
}

std::vector<imbtext::Task> parse_tasks(const std::vector<std::string>& names) {
    std::vector<imbtext::Task> tasks;
    for (const auto& n : names) tasks.push_back(imbtext::parse_task(n));
    std::sort(tasks.begin(), tasks.end());
    tasks.erase(std::unique(tasks.begin(), tasks.end()), tasks.end());
    if (tasks.empty()) throw ConfigError("tasks: at least one task is required");
    return tasks;
}

imbtext::Corpus load_and_merge(const RunConfig& cfg,
                               const std::optional<std::set<imbtext::Task>>& filter = std::nullopt) {
    if (cfg.corpus.empty()) throw ConfigError("corpus: a corpus file is required");
    imbtext::Corpus corpus = imbtext::load_corpus(cfg.corpus, filter);
    for (const auto& extra : cfg.extra_corpus)
        imbtext::merge_corpus(corpus, imbtext::load_corpus(extra, filter));
    imbtext::preprocess(corpus);
    return corpus;
}

// "tfidf" or "embeddings:PATH"
struct FeatureSpec {
    bool tfidf = true;
    std::string embedding_path;
};

FeatureSpec parse_feature_spec(const std::string& features) {
    if (features == "tfidf") return {true, ""};
    const std::string prefix = "embeddings:";
    if (features.rfind(prefix, 0) == 0 && features.size() > prefix.size())
        return {false, features.substr(prefix.size())};
    throw ConfigError("features: expected 'tfidf' or 'embeddings:PATH', got '" + features + "'");
}

imbtext::FeatureFactory make_factory(const RunConfig& cfg, const imbtext::Corpus& corpus,
                                     const std::vector<imbtext::Task>& tasks,
                                     std::shared_ptr<const imbtext::EmbeddingTable>* table_out = nullptr) {
    const FeatureSpec spec = parse_feature_spec(cfg.features);
    if (spec.tfidf) {
        imbtext::TfidfConfig tc;
        tc.max_tokens = cfg.max_tokens;
        tc.min_df = cfg.min_df;
        return imbtext::FeatureFactory::tfidf(tc);
    }
    std::set<std::string> expected;
    for (imbtext::Task task : tasks) {
        const imbtext::LabelSpace space = imbtext::build_label_space(corpus, task);
        for (const auto& u : imbtext::collect_units(corpus, task, space)) expected.insert(u.unit_id);
    }
    auto table = std::make_shared<imbtext::EmbeddingTable>(
        imbtext::EmbeddingTable::load(spec.embedding_path, expected));
    if (table_out) *table_out = table;
    return imbtext::FeatureFactory::embeddings(table);
}

void write_text_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw imbtext::IoError("cannot write " + path.string());
    out << content;
    if (!out) throw imbtext::IoError("failed writing " + path.string());
}

void write_json_file(const fs::path& path, const ordered_json& j) { write_text_file(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------- subcommands

int cmd_stats(const RunConfig& cfg) {
    const imbtext::Corpus corpus = load_and_merge(cfg);
    for (const auto& name : cfg.tasks) {
        const imbtext::StatsReport stats = imbtext::token_stats(corpus, imbtext::parse_task(name));
        std::cout << imbtext::render_stats(stats);
    }
    return 0;
}

int cmd_folds(const RunConfig& cfg, const std::string& out_file, bool shared) {
    const imbtext::Corpus corpus = load_and_merge(cfg);
    const imbtext::Seeds seeds = resolve_seeds(cfg);
    ordered_json j;
    if (shared) {
        const imbtext::FoldPlan plan = imbtext::plan_shared_folds(corpus, cfg.k, seeds.folds);
        j = imbtext::fold_plan_to_json(plan);
        j["task"] = "shared";
    } else {
        if (cfg.tasks.size() != 1)
            throw ConfigError("tasks: the folds subcommand takes exactly one --task (or --shared)");
        const imbtext::FoldPlan plan =
            imbtext::plan_folds(corpus, imbtext::parse_task(cfg.tasks[0]), cfg.k, seeds.folds);
        j = imbtext::fold_plan_to_json(plan);
        j["task"] = cfg.tasks[0];
    }
    write_json_file(out_file, j);
    std::cout << "wrote " << out_file << "\n";
    return 0;
}

int cmd_train(const RunConfig& cfg) {
    const std::vector<imbtext::Task> tasks = parse_tasks(cfg.tasks);
    const imbtext::TrainConfig tc = to_train_config(cfg);
    const imbtext::Corpus corpus = load_and_merge(cfg);
    const imbtext::FeatureFactory factory = make_factory(cfg, corpus, tasks);
    const imbtext::FoldPlan plan = imbtext::plan_shared_folds(corpus, cfg.k, tc.seeds.folds);

    const imbtext::MultiTaskRun run = imbtext::run_strategy(corpus, tasks, plan, factory, tc);

    const fs::path out(cfg.out);
    fs::create_directories(out);
    write_json_file(out / "resolved_config.json", resolved_config_json(cfg));
    write_json_file(out / "fold_plan.json", imbtext::fold_plan_to_json(plan));

    ordered_json manifest;
    manifest["features"] = cfg.features;
    manifest["strategy"] = cfg.strategy;
    manifest["threshold"] = cfg.threshold;
    ordered_json jtasks = ordered_json::object();
    for (imbtext::Task task : run.tasks) {
        const imbtext::CvRun& cv = run.runs.at(task);
        const std::string tname = imbtext::to_string(task);
        write_json_file(out / ("cv_report_" + tname + ".json"), imbtext::cv_report_to_json(cv.report));
        write_text_file(out / ("cv_report_" + tname + ".txt"), imbtext::render_cv_report(cv.report));

        ordered_json folds = ordered_json::array();
        for (int fold = 0; fold < plan.k; ++fold) {
            const fs::path fold_dir = out / tname / std::to_string(fold);
            fs::create_directories(fold_dir);
            imbtext::save_checkpoint(fold_dir / "best.ckpt", cv.checkpoints[fold]);
            ordered_json jf;
            jf["fold"] = fold;
            jf["score"] = cv.report.folds[fold].score;
            jf["val_score"] = cv.report.folds[fold].val_score;
            jf["path"] = tname + "/" + std::to_string(fold) + "/best.ckpt";
            if (cv.fold_tfidf[fold]) {
                cv.fold_tfidf[fold]->save(fold_dir / "tfidf.json");
                jf["tfidf"] = tname + "/" + std::to_string(fold) + "/tfidf.json";
            }
            folds.push_back(std::move(jf));
        }
        ordered_json jt;
        jt["metric"] = cv.report.metric;
        jt["mean"] = cv.report.mean;
        jt["folds"] = std::move(folds);
        jtasks[tname] = std::move(jt);
        std::cout << imbtext::render_cv_report(cv.report);
    }
    manifest["tasks"] = std::move(jtasks);
    write_json_file(out / "manifest.json", manifest);
    std::cout << "artifacts written to " << out.string() << "\n";
    return 0;
}

int cmd_ablate(const RunConfig& cfg) {
    const std::vector<imbtext::Task> tasks = parse_tasks(cfg.tasks);
    const imbtext::TrainConfig tc = to_train_config(cfg);
    const imbtext::Corpus corpus = load_and_merge(cfg);
    const imbtext::FeatureFactory factory = make_factory(cfg, corpus, tasks);
    const imbtext::FoldPlan plan = imbtext::plan_shared_folds(corpus, cfg.k, tc.seeds.folds);

    const imbtext::AblationReport report = imbtext::run_ablation(corpus, tasks, plan, factory, tc);

    const fs::path out(cfg.out);
    fs::create_directories(out);
    write_json_file(out / "resolved_config.json", resolved_config_json(cfg));
    write_json_file(out / "fold_plan.json", imbtext::fold_plan_to_json(plan));
    write_json_file(out / "ablation_report.json", imbtext::ablation_to_json(report));
    const std::string table = imbtext::render_ablation_table(report);
    write_text_file(out / "ablation_table.txt", table);
    std::cout << table << "artifacts written to " << out.string() << "\n";
    return 0;
}

int cmd_predict(const RunConfig& cfg, const std::string& run_dir, const std::string& out_file,
                const std::string& task_name) {
    const fs::path run(run_dir);
    std::ifstream mf(run / "manifest.json");
    if (!mf) throw imbtext::IoError("cannot open " + (run / "manifest.json").string());
    json manifest = json::parse(mf);

    const imbtext::Task task = imbtext::parse_task(task_name);
    const std::string tname = imbtext::to_string(task);
    if (!manifest.at("tasks").contains(tname))
        throw ConfigError("task: run " + run_dir + " has no trained task " + tname);
    const json& jtask = manifest.at("tasks").at(tname);
    const double threshold = manifest.value("threshold", 0.5);

    std::vector<double> val_scores;
    for (const auto& jf : jtask.at("folds")) val_scores.push_back(jf.at("val_score").get<double>());
    const std::vector<int> top = imbtext::select_top_k(val_scores, 3);

    std::array<imbtext::ModelCheckpoint, 3> ckpts;
    std::array<std::optional<imbtext::TfidfModel>, 3> tfidf;
    for (int i = 0; i < 3; ++i) {
        const json& jf = jtask.at("folds").at(top[i]);
        ckpts[i] = imbtext::load_checkpoint(run / jf.at("path").get<std::string>());
        if (jf.contains("tfidf"))
            tfidf[i] = imbtext::TfidfModel::load(run / jf.at("tfidf").get<std::string>());
    }

    // Gold labels are never read on this path: drop them at load time.
    imbtext::Corpus corpus = imbtext::load_corpus(cfg.corpus, std::set<imbtext::Task>{});
    for (const auto& extra : cfg.extra_corpus)
        imbtext::merge_corpus(corpus, imbtext::load_corpus(extra, std::set<imbtext::Task>{}));
    imbtext::preprocess(corpus);
    const std::vector<imbtext::Unit> units = imbtext::collect_units_unlabeled(corpus, task);

    std::shared_ptr<const imbtext::EmbeddingTable> table;
    const std::string manifest_features = manifest.at("features").get<std::string>();
    if (!tfidf[0]) {
        const FeatureSpec spec = parse_feature_spec(
            cfg.features == "tfidf" ? manifest_features : cfg.features);
        if (spec.tfidf)
            throw ConfigError("features: this run was trained on embeddings; pass "
                              "--features embeddings:PATH covering the prediction corpus");
        std::set<std::string> expected;
        for (const auto& u : units) expected.insert(u.unit_id);
        table = std::make_shared<imbtext::EmbeddingTable>(
            imbtext::EmbeddingTable::load(spec.embedding_path, expected));
    }

    const int none_idx = [&] {
        if (imbtext::mode_of(task) != imbtext::LabelMode::Multilabel) return -1;
        const auto& labels = ckpts[0].labels;
        const auto it = std::find(labels.begin(), labels.end(), imbtext::kNoneLabel);
        return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
    }();

    std::ostringstream lines;
    for (const auto& u : units) {
        std::array<imbtext::FeatureVector, 3> xs;
        for (int i = 0; i < 3; ++i)
            xs[i] = tfidf[i] ? tfidf[i]->transform(u.tokens()) : table->get(u.unit_id);
        const imbtext::EnsemblePrediction pred = imbtext::ensemble_predict(
            {&ckpts[0], &ckpts[1], &ckpts[2]}, {&xs[0], &xs[1], &xs[2]}, threshold, none_idx);
        ordered_json j;
        j["id"] = u.unit_id;
        if (pred.mode == imbtext::LabelMode::Multiclass) {
            j["label"] = ckpts[0].labels[pred.label];
        } else {
            std::vector<std::string> names;
            for (int l : pred.labels) names.push_back(ckpts[0].labels[l]);
            j["labels"] = names;
        }
        lines << j.dump() << '\n';
    }
    write_text_file(out_file, lines.str());
    std::cout << "wrote " << units.size() << " predictions to " << out_file << "\n";
    return 0;
}

int cmd_synth(const imbtext::SynthConfig& sc, const std::string& out_dir) {
    const imbtext::SynthFixture fix = imbtext::make_synth_fixture(sc);
    const fs::path out(out_dir);
    fs::create_directories(out);
    imbtext::write_corpus_jsonl(fix.corpus, out / "corpus.jsonl");
    imbtext::write_embeddings_jsonl(fix.embeddings, out / "embeddings.jsonl");

    ordered_json j;
    j["n"] = sc.n;
    j["ratio"] = sc.ratio;
    j["dim"] = sc.dim;
    j["separation"] = sc.separation;
    j["seed"] = sc.seed;
    j["t2_frac"] = sc.t2_frac;
    j["max_paragraphs"] = sc.max_paragraphs;
    write_json_file(out / "synth_config.json", j);
    std::cout << "wrote " << fix.corpus.docs.size() << " articles to " << (out / "corpus.jsonl").string()
              << "\n";
    return 0;
}

std::vector<long> parse_ratio(const std::string& text) {
    std::vector<long> ratio;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ':')) {
        try {
            ratio.push_back(std::stol(part));
        } catch (const std::exception&) {
            throw ConfigError("ratio: expected colon-separated integers, got '" + text + "'");
        }
    }
    return ratio;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"imbalanced multilingual text classification toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_file;
    std::string cw_flag = "on", sw_flag = "on", us_flag = "off";
    std::string folds_out = "folds.json";
    bool folds_shared = false;
    std::string predict_run, predict_out = "predictions.jsonl", predict_task = "T1";
    imbtext::SynthConfig synth_cfg;
    std::string synth_ratio = "878:269:87";
    std::string synth_out = "synth_out";

    const auto add_common = [&](CLI::App* sub, bool with_train_flags) {
        sub->add_option("--config", config_file, "JSON config file (flags override it)");
        sub->add_option("--corpus", cfg.corpus, "corpus file (JSON Lines or a JSON array)");
        sub->add_option("--extra-corpus", cfg.extra_corpus, "additional corpora merged in (e.g. dev set)");
        sub->add_option("--task", cfg.tasks, "tasks to process (T1, T2, T3)");
        sub->add_option("--seed", cfg.seed_base, "base seed (IMB_SEED env overrides config/defaults)");
        sub->add_option("--k", cfg.k, "fold count");
        sub->add_option("--out", cfg.out, "output directory");
        if (!with_train_flags) return;
        sub->add_option("--features", cfg.features, "tfidf | embeddings:PATH");
        sub->add_option("--strategy", cfg.strategy, "agnostic | dependent");
        sub->add_option("--class-weights", cw_flag, "on | off")->check(CLI::IsMember({"on", "off"}));
        sub->add_option("--sample-weights", sw_flag, "on | off")->check(CLI::IsMember({"on", "off"}));
        sub->add_option("--undersample", us_flag, "on | off")->check(CLI::IsMember({"on", "off"}));
        sub->add_option("--epochs", cfg.epochs_max, "max training epochs");
        sub->add_option("--patience", cfg.patience, "early stopping tolerance in epochs");
        sub->add_option("--batch-size", cfg.batch_size, "batch size");
        sub->add_option("--hidden", cfg.hidden, "trunk width (0 = no trunk)");
        sub->add_option("--lr", cfg.lr, "learning rate");
        sub->add_option("--weight-decay", cfg.weight_decay, "decoupled weight decay");
        sub->add_option("--threshold", cfg.threshold, "multilabel decision threshold");
        sub->add_option("--val-frac", cfg.val_frac, "inner validation fraction (0 = monitor the fold)");
        sub->add_option("--sampler-epoch-multiplier", cfg.sampler_epoch_multiplier,
                        "weighted-sampler epoch length as a multiple of the dataset size");
        sub->add_option("--min-df", cfg.min_df, "tfidf minimum document frequency");
        sub->add_option("--max-tokens", cfg.max_tokens, "token truncation limit");
        sub->add_flag("--by-language", cfg.by_language, "add a per-language score breakdown");
    };

    CLI::App* stats = app.add_subcommand("stats", "token statistics per task");
    add_common(stats, false);

    CLI::App* folds = app.add_subcommand("folds", "write a stratified fold plan");
    add_common(folds, false);
    folds->add_option("--plan-out", folds_out, "output file for the fold plan");
    folds->add_flag("--shared", folds_shared, "one plan over all tasks' labeled articles");

    CLI::App* train = app.add_subcommand("train", "cross-validated training run");
    add_common(train, true);

    CLI::App* ablate = app.add_subcommand("ablate", "component ablation grid");
    add_common(ablate, true);

    CLI::App* predict = app.add_subcommand("predict", "top-3 ensemble predictions");
    add_common(predict, true);
    predict->add_option("--run", predict_run, "directory written by a train run")->required();
    predict->add_option("--predictions-out", predict_out, "output JSONL file");
    predict->add_option("--predict-task", predict_task, "task to predict (T1, T2 or T3)");

    CLI::App* synth = app.add_subcommand("synth", "generate the synthetic imbalanced fixture");
    synth->add_option("--ratio", synth_ratio, "class ratio, e.g. 878:269:87");
    synth->add_option("--n", synth_cfg.n, "number of articles");
    synth->add_option("--dim", synth_cfg.dim, "feature dimension");
    synth->add_option("--sep", synth_cfg.separation, "pairwise distance between class means");
    synth->add_option("--seed", synth_cfg.seed, "generator seed");
    synth->add_option("--t2-frac", synth_cfg.t2_frac, "fraction of articles with T2 labels");
    synth->add_option("--max-paragraphs", synth_cfg.max_paragraphs, "max paragraphs per article");
    synth->add_option("--out", synth_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();

        if (sub == synth) {
            synth_cfg.ratio = parse_ratio(synth_ratio);
            return cmd_synth(synth_cfg, synth_out);
        }

        // precedence: defaults < config file < IMB_SEED < explicit flags
        RunConfig file_cfg;
        if (sub->count("--config")) {
            std::ifstream in(config_file);
            if (!in) throw imbtext::IoError("cannot open config file: " + config_file);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
            apply_config_json(file_cfg, j);
        }
        const RunConfig cli_cfg = cfg;  // flag values (over built-in defaults)
        cfg = sub->count("--config") ? file_cfg : cfg;
        if (const char* env = std::getenv("IMB_SEED"); env && *env && !sub->count("--seed"))
            cfg.seed_base = std::stoull(env);

        const auto take = [&](const std::string& flag, auto member) {
            if (sub->count(flag)) cfg.*member = cli_cfg.*member;
        };
        take("--corpus", &RunConfig::corpus);
        take("--extra-corpus", &RunConfig::extra_corpus);
        take("--task", &RunConfig::tasks);
        take("--seed", &RunConfig::seed_base);
        take("--k", &RunConfig::k);
        take("--out", &RunConfig::out);
        if (sub == train || sub == ablate || sub == predict) {
            take("--features", &RunConfig::features);
            take("--strategy", &RunConfig::strategy);
            take("--epochs", &RunConfig::epochs_max);
            take("--patience", &RunConfig::patience);
            take("--batch-size", &RunConfig::batch_size);
            take("--hidden", &RunConfig::hidden);
            take("--lr", &RunConfig::lr);
            take("--weight-decay", &RunConfig::weight_decay);
            take("--threshold", &RunConfig::threshold);
            take("--val-frac", &RunConfig::val_frac);
            take("--sampler-epoch-multiplier", &RunConfig::sampler_epoch_multiplier);
            take("--min-df", &RunConfig::min_df);
            take("--max-tokens", &RunConfig::max_tokens);
            if (sub->count("--by-language")) cfg.by_language = cli_cfg.by_language;
            if (sub->count("--class-weights")) cfg.class_weights = parse_on_off(cw_flag, "class-weights");
            if (sub->count("--sample-weights")) cfg.sample_weights = parse_on_off(sw_flag, "sample-weights");
            if (sub->count("--undersample")) cfg.undersample = parse_on_off(us_flag, "undersample");
        }

        if (sub == stats) return cmd_stats(cfg);
        if (sub == folds) return cmd_folds(cfg, folds_out, folds_shared);
        if (sub == train) return cmd_train(cfg);
        if (sub == ablate) return cmd_ablate(cfg);
        if (sub == predict) return cmd_predict(cfg, predict_run, predict_out, predict_task);
        throw ConfigError("unknown subcommand");
    } catch (const imbtext::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
