#include "imbtext/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace imbtext {

using nlohmann::ordered_json;

namespace {

std::string fmt_score(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

}  // namespace

ordered_json stats_to_json(const StatsReport& stats) {
    ordered_json j;
    j["task"] = to_string(stats.task);
    j["n_units"] = stats.n_units;
    j["min_tokens"] = stats.min_tokens;
    j["max_tokens"] = stats.max_tokens;
    j["avg_tokens"] = stats.avg_tokens;
    return j;
}

std::string render_stats(const StatsReport& stats) {
    std::ostringstream os;
    os << "task " << to_string(stats.task) << ": " << stats.n_units << " units, tokens min "
       << stats.min_tokens << " / max " << stats.max_tokens << " / avg " << std::fixed
       << std::setprecision(1) << stats.avg_tokens << "\n";
    return os.str();
}

ordered_json cv_report_to_json(const CvReport& report) {
    ordered_json j;
    j["task"] = to_string(report.task);
    j["metric"] = report.metric;
    j["k"] = report.k;
    j["mean"] = report.mean;
    j["labels"] = report.labels;
    ordered_json folds = ordered_json::array();
    for (const auto& f : report.folds) {
        ordered_json jf;
        jf["fold"] = f.fold;
        jf["score"] = f.score;
        jf["val_score"] = f.val_score;
        jf["best_epoch"] = f.best_epoch;
        jf["epochs_trained"] = f.epochs_trained;
        if (!f.confusion.empty()) jf["confusion"] = f.confusion;
        folds.push_back(std::move(jf));
    }
    j["folds"] = std::move(folds);
    if (!report.by_language.empty()) {
        ordered_json langs = ordered_json::object();
        for (const auto& [lang, score] : report.by_language) langs[lang] = score;
        j["by_language"] = std::move(langs);
    }
    return j;
}

std::string render_cv_report(const CvReport& report) {
    std::ostringstream os;
    os << "== " << to_string(report.task) << " (" << report.metric << ", " << report.k
       << "-fold CV) ==\n";
    os << "fold   score    val      best_epoch  epochs\n";
    for (const auto& f : report.folds) {
        os << std::left << std::setw(7) << f.fold << std::setw(9) << fmt_score(f.score) << std::setw(9)
           << fmt_score(f.val_score) << std::setw(12) << f.best_epoch << f.epochs_trained << "\n";
    }
    os << "mean   " << fmt_score(report.mean) << "\n";
    if (!report.by_language.empty()) {
        os << "per-language (pooled eval predictions):\n";
        for (const auto& [lang, score] : report.by_language)
            os << "  " << std::left << std::setw(6) << lang << fmt_score(score) << "\n";
    }

    // aggregated confusion matrix, gold rows x predicted columns
    if (!report.folds.empty() && !report.folds.front().confusion.empty()) {
        const std::size_t L = report.labels.size();
        std::vector<std::vector<std::int64_t>> total(L, std::vector<std::int64_t>(L, 0));
        for (const auto& f : report.folds)
            for (std::size_t g = 0; g < L; ++g)
                for (std::size_t p = 0; p < L; ++p) total[g][p] += f.confusion[g][p];
        std::size_t w = 7;
        for (const auto& l : report.labels) w = std::max(w, l.size() + 2);
        os << "confusion (rows gold, cols predicted, all folds):\n";
        os << std::setw(static_cast<int>(w)) << "";
        for (const auto& l : report.labels) os << std::setw(static_cast<int>(w)) << l;
        os << "\n";
        for (std::size_t g = 0; g < L; ++g) {
            os << std::setw(static_cast<int>(w)) << report.labels[g];
            for (std::size_t p = 0; p < L; ++p) os << std::setw(static_cast<int>(w)) << total[g][p];
            os << "\n";
        }
    }
    return os.str();
}

ordered_json ablation_to_json(const AblationReport& report) {
    ordered_json j;
    ordered_json tasks = ordered_json::array();
    for (Task t : report.tasks) tasks.push_back(to_string(t));
    j["tasks"] = std::move(tasks);
    ordered_json variants = ordered_json::object();
    for (const auto& [name, row] : report.variants) {
        ordered_json cells = ordered_json::object();
        for (const auto& [task, rep] : row) {
            if (rep)
                cells[to_string(task)] = cv_report_to_json(*rep);
            else
                cells[to_string(task)] = "n/a";
        }
        variants[name] = std::move(cells);
    }
    j["variants"] = std::move(variants);
    return j;
}

std::string render_ablation_table(const AblationReport& report) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "variant";
    for (Task t : report.tasks) os << std::setw(10) << to_string(t);
    os << "\n";
    for (const auto& [name, row] : report.variants) {
        os << std::setw(10) << name;
        for (Task t : report.tasks) {
            const auto& cell = row.at(t);
            os << std::setw(10) << (cell ? fmt_score(cell->mean) : std::string("n/a"));
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace imbtext
