#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tasks.hpp"

namespace spinhop {

// Rendering of experiment outcomes. Times are ns, energies nJ, powers mW.

std::string bits_to_string(const BitVec& bits);

nlohmann::json report_to_json(const TrialReport& rep);
nlohmann::json trial_record_to_json(const TrialRecord& rec);
nlohmann::json recall_stats_to_json(const RecallStats& st);
nlohmann::json sweep_results_to_json(std::span<const RecallStats> runs);
nlohmann::json image_results_to_json(std::span<const ImageLevelResult> levels);
nlohmann::json maxcut_results_to_json(std::span<const MaxcutResult> results);

// One row per trial; stable documented column sets.
std::string recall_trials_csv(const RecallStats& st);
std::string sweep_trials_csv(std::span<const RecallStats> runs);
std::string image_trials_csv(std::span<const ImageLevelResult> levels);
std::string maxcut_trials_csv(std::span<const MaxcutResult> results);

// t_ns plus one column per soma; empty string when the trial kept no trace.
std::string trace_csv(const TrialReport& rep);

std::string recall_summary_line(const RecallStats& st);
std::string sweep_summary_line(std::span<const RecallStats> runs);
std::string image_summary_line(std::span<const ImageLevelResult> levels);
std::string maxcut_summary_line(std::span<const MaxcutResult> results);

}  // namespace spinhop
