#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace spinhop {
namespace {

using nlohmann::json;

constexpr double kNs = 1e9;
constexpr double kNm = 1e9;
constexpr double kNj = 1e9;
constexpr double kMw = 1e3;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

json energy_json(const EnergyByClass& e) {
  return json{{"weights", e.weights * kNj},
              {"vdw", e.vdw * kNj},
              {"vc", e.vc * kNj},
              {"total", e.total() * kNj}};
}

}  // namespace

std::string bits_to_string(const BitVec& bits) {
  std::string s;
  s.reserve(bits.size());
  for (uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

json report_to_json(const TrialReport& rep) {
  json j{{"converged", rep.converged},
         {"chargeup_incomplete", rep.chargeup_incomplete},
         {"t_chargeup_ns", rep.t_chargeup * kNs},
         {"t_converge_ns", rep.t_converge * kNs},
         {"final_bits", bits_to_string(rep.final_bits)},
         {"energy_nj", energy_json(rep.energy)},
         {"chargeup_energy_nj", energy_json(rep.chargeup_energy)},
         {"avg_power_mw", rep.avg_power * kMw},
         {"steps", rep.steps}};
  if (rep.validated) {
    j["validated"] = true;
    j["max_kcl_residual_rel"] = rep.max_kcl_residual_rel;
    j["max_power_residual_rel"] = rep.max_power_residual_rel;
  }
  return j;
}

json trial_record_to_json(const TrialRecord& rec) {
  json j{{"trial", rec.trial_index},
         {"source_pattern", rec.source_pattern},
         {"input", bits_to_string(rec.input)},
         {"accuracy", rec.accuracy},
         {"pixel_error", rec.pixel_error},
         {"full_recall", rec.full_recall},
         {"equal_split_frozen", rec.equal_split_frozen},
         {"fault", rec.fault}};
  if (!rec.fault) j["report"] = report_to_json(rec.report);
  return j;
}

json recall_stats_to_json(const RecallStats& st) {
  json j{{"experiment", "recall"},
         {"n", st.n},
         {"n_patterns", st.n_patterns},
         {"trials", st.trials},
         {"full_recall_rate", st.full_recall_rate},
         {"bitwise_accuracy", st.bitwise_accuracy},
         {"converged_rate", st.converged_rate},
         {"mean_t_converge_ns", st.mean_t_converge * kNs},
         {"mean_t_chargeup_ns", st.mean_t_chargeup * kNs},
         {"mean_energy_nj", st.mean_energy * kNj},
         {"mean_chargeup_energy_nj", st.mean_chargeup_energy * kNj},
         {"mean_avg_power_mw", st.mean_avg_power * kMw},
         {"frozen_count", st.frozen_count},
         {"fault_count", st.fault_count},
         {"v_c_below_weights", st.v_c_below_weights}};
  json detail = json::array();
  for (const TrialRecord& r : st.records) detail.push_back(trial_record_to_json(r));
  j["trials_detail"] = std::move(detail);
  return j;
}

json sweep_results_to_json(std::span<const RecallStats> runs) {
  json arr = json::array();
  for (const RecallStats& st : runs) arr.push_back(recall_stats_to_json(st));
  return json{{"experiment", "sweep"}, {"runs", std::move(arr)}};
}

json image_results_to_json(std::span<const ImageLevelResult> levels) {
  json arr = json::array();
  for (const ImageLevelResult& lv : levels) {
    json j{{"distortion", lv.distortion},
           {"trials", lv.trials},
           {"mean_pixel_error", lv.mean_pixel_error},
           {"max_pixel_error", lv.max_pixel_error},
           {"mean_t_converge_ns", lv.mean_t_converge * kNs},
           {"mean_energy_nj", lv.mean_energy * kNj},
           {"fault_count", lv.fault_count}};
    json detail = json::array();
    for (const TrialRecord& r : lv.records) detail.push_back(trial_record_to_json(r));
    j["trials_detail"] = std::move(detail);
    arr.push_back(std::move(j));
  }
  return json{{"experiment", "image"}, {"levels", std::move(arr)}};
}

json maxcut_results_to_json(std::span<const MaxcutResult> results) {
  json arr = json::array();
  double ratio_sum = 0;
  long long cut_sum = 0, best_sum = 0;
  int rated = 0;
  for (const MaxcutResult& r : results) {
    json j{{"instance", r.instance},
           {"cut", r.cut},
           {"best_known", r.best_known},
           {"ratio", r.ratio},
           {"partition", bits_to_string(r.partition)},
           {"fault", r.fault}};
    if (!r.fault) j["report"] = report_to_json(r.report);
    arr.push_back(std::move(j));
    if (r.best_known > 0) {
      ratio_sum += r.ratio;
      cut_sum += r.cut;
      best_sum += r.best_known;
      ++rated;
    }
  }
  json j{{"experiment", "maxcut"}, {"instances", std::move(arr)}};
  if (rated > 0) {
    j["mean_ratio"] = ratio_sum / rated;
    j["aggregate_ratio"] =
        static_cast<double>(cut_sum) / static_cast<double>(best_sum);
  }
  return j;
}

std::string recall_trials_csv(const RecallStats& st) {
  std::ostringstream out;
  out << "trial,source_pattern,converged,fault,full_recall,accuracy,"
         "equal_split_frozen,t_chargeup_ns,t_converge_ns,energy_nj,"
         "chargeup_energy_nj,avg_power_mw\n";
  for (const TrialRecord& r : st.records) {
    out << r.trial_index << ',' << r.source_pattern << ','
        << (r.report.converged ? 1 : 0) << ',' << (r.fault ? 1 : 0) << ','
        << (r.full_recall ? 1 : 0) << ',' << num(r.accuracy) << ','
        << (r.equal_split_frozen ? 1 : 0) << ','
        << num(r.report.t_chargeup * kNs) << ','
        << num(r.report.t_converge * kNs) << ','
        << num(r.report.energy_total * kNj) << ','
        << num(r.report.chargeup_energy.total() * kNj) << ','
        << num(r.report.avg_power * kMw) << '\n';
  }
  return out.str();
}

std::string sweep_trials_csv(std::span<const RecallStats> runs) {
  std::ostringstream out;
  out << "n,n_patterns,trials,full_recall_rate,bitwise_accuracy,converged_rate,"
         "mean_t_converge_ns,mean_energy_nj,frozen_count,fault_count\n";
  for (const RecallStats& st : runs)
    out << st.n << ',' << st.n_patterns << ',' << st.trials << ','
        << num(st.full_recall_rate) << ',' << num(st.bitwise_accuracy) << ','
        << num(st.converged_rate) << ',' << num(st.mean_t_converge * kNs) << ','
        << num(st.mean_energy * kNj) << ',' << st.frozen_count << ','
        << st.fault_count << '\n';
  return out.str();
}

std::string image_trials_csv(std::span<const ImageLevelResult> levels) {
  std::ostringstream out;
  out << "distortion,trial,image,pixel_error,converged,fault,t_converge_ns,"
         "energy_nj\n";
  for (const ImageLevelResult& lv : levels)
    for (const TrialRecord& r : lv.records)
      out << num(lv.distortion) << ',' << r.trial_index << ','
          << r.source_pattern << ',' << r.pixel_error << ','
          << (r.report.converged ? 1 : 0) << ',' << (r.fault ? 1 : 0) << ','
          << num(r.report.t_converge * kNs) << ','
          << num(r.report.energy_total * kNj) << '\n';
  return out.str();
}

std::string maxcut_trials_csv(std::span<const MaxcutResult> results) {
  std::ostringstream out;
  out << "instance,n,cut,best_known,ratio,converged,fault,t_converge_ns,"
         "energy_nj,chargeup_energy_nj,avg_power_mw\n";
  for (const MaxcutResult& r : results)
    out << r.instance << ',' << r.partition.size() << ',' << r.cut << ','
        << r.best_known << ',' << num(r.ratio) << ','
        << (r.report.converged ? 1 : 0) << ',' << (r.fault ? 1 : 0) << ','
        << num(r.report.t_converge * kNs) << ','
        << num(r.report.energy_total * kNj) << ','
        << num(r.report.chargeup_energy.total() * kNj) << ','
        << num(r.report.avg_power * kMw) << '\n';
  return out.str();
}

std::string trace_csv(const TrialReport& rep) {
  if (rep.trace_times.empty()) return "";
  const size_t n = rep.trace_soma_positions.empty()
                       ? 0
                       : rep.trace_soma_positions[0].size();
  std::ostringstream out;
  out << "t_ns";
  for (size_t i = 0; i < n; ++i) out << ",soma_" << i << "_nm";
  out << '\n';
  for (size_t k = 0; k < rep.trace_times.size(); ++k) {
    out << num(rep.trace_times[k] * kNs);
    for (double p : rep.trace_soma_positions[k]) out << ',' << num(p * kNm);
    out << '\n';
  }
  return out.str();
}

std::string recall_summary_line(const RecallStats& st) {
  std::ostringstream out;
  out << "recall n=" << st.n << " patterns=" << st.n_patterns
      << " trials=" << st.trials << ": full_recall="
      << num(100.0 * st.full_recall_rate) << "% bitwise="
      << num(100.0 * st.bitwise_accuracy) << "% mean_t="
      << num(st.mean_t_converge * kNs) << "ns mean_E="
      << num(st.mean_energy * kNj) << "nJ frozen=" << st.frozen_count
      << " faults=" << st.fault_count;
  return out.str();
}

std::string sweep_summary_line(std::span<const RecallStats> runs) {
  std::ostringstream out;
  out << "sweep runs=" << runs.size() << ':';
  for (const RecallStats& st : runs)
    out << " [n=" << st.n << " p=" << st.n_patterns << " full="
        << num(100.0 * st.full_recall_rate) << "% bitwise="
        << num(100.0 * st.bitwise_accuracy) << "%]";
  return out.str();
}

std::string image_summary_line(std::span<const ImageLevelResult> levels) {
  std::ostringstream out;
  out << "image levels=" << levels.size();
  for (const ImageLevelResult& lv : levels)
    out << " err@" << num(lv.distortion) << "=" << num(lv.mean_pixel_error);
  return out.str();
}

std::string maxcut_summary_line(std::span<const MaxcutResult> results) {
  std::ostringstream out;
  double ratio_sum = 0;
  int rated = 0;
  for (const MaxcutResult& r : results)
    if (r.best_known > 0) {
      ratio_sum += r.ratio;
      ++rated;
    }
  out << "maxcut instances=" << results.size();
  if (rated > 0) out << " mean_ratio=" << num(ratio_sum / rated);
  for (const MaxcutResult& r : results)
    out << ' ' << (r.instance.empty() ? "graph" : r.instance) << ":cut=" << r.cut;
  return out.str();
}

}  // namespace spinhop
