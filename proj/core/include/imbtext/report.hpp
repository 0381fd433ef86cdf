#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "imbtext/corpus.hpp"
#include "imbtext/pipeline.hpp"

namespace imbtext {

nlohmann::ordered_json stats_to_json(const StatsReport& stats);
std::string render_stats(const StatsReport& stats);

nlohmann::ordered_json cv_report_to_json(const CvReport& report);
std::string render_cv_report(const CvReport& report);

nlohmann::ordered_json ablation_to_json(const AblationReport& report);
std::string render_ablation_table(const AblationReport& report);

}  // namespace imbtext
