#include "spinhop/spinhop.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "json.hpp"
#include "report.hpp"
#include "tasks.hpp"

using nlohmann::json;

struct spinhop_config {
  spinhop::RunConfig cfg;
};

struct spinhop_result {
  std::string json_text;
  std::string csv_text;
  std::string summary;
  std::map<long long, std::string> traces;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
spinhop_status guarded(Fn&& fn) {
  try {
    fn();
    return SPINHOP_OK;
  } catch (const spinhop::ParseError& e) {
    g_last_error = e.what();
    return SPINHOP_ERR_PARSE;
  } catch (const spinhop::ConfigError& e) {
    g_last_error = e.what();
    return SPINHOP_ERR_CONFIG;
  } catch (const spinhop::NumericFault& e) {
    g_last_error = e.what();
    return SPINHOP_ERR_NUMERIC;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return SPINHOP_ERR_INVALID;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPINHOP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SPINHOP_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

spinhop_status require(bool cond, const char* msg) {
  if (cond) return SPINHOP_OK;
  g_last_error = msg;
  return SPINHOP_ERR_INVALID;
}

json parse_options(const char* options_json) {
  if (options_json == nullptr || options_json[0] == '\0') return json::object();
  json j = json::parse(options_json, nullptr, false);
  if (j.is_discarded())
    throw spinhop::ConfigError("options are not valid JSON");
  if (!j.is_object())
    throw spinhop::ConfigError("options must be a JSON object");
  return j;
}

void reject_unknown_options(const json& j,
                            std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw spinhop::ConfigError("unknown option key: " + item.key());
  }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    it->get_to(out);
  } catch (const json::exception&) {
    throw spinhop::ConfigError(std::string("option has the wrong type: ") + key);
  }
}

spinhop::InputMode parse_input_mode(const std::string& s) {
  if (s == "uniform_random") return spinhop::InputMode::uniform_random;
  if (s == "distorted_stored") return spinhop::InputMode::distorted_stored;
  throw spinhop::ConfigError(
      "unknown input_mode: " + s +
      " (expected uniform_random or distorted_stored)");
}

spinhop::RecallOptions recall_options_from_json(const json& j, uint64_t seed) {
  reject_unknown_options(j, {"n", "patterns", "trials", "exhaustive",
                             "input_mode", "distortion", "seed",
                             "keep_records"});
  spinhop::RecallOptions ro;
  ro.seed = seed;
  read_opt(j, "n", ro.n);
  read_opt(j, "patterns", ro.n_patterns);
  read_opt(j, "trials", ro.trials);
  read_opt(j, "exhaustive", ro.exhaustive);
  std::string mode;
  read_opt(j, "input_mode", mode);
  if (!mode.empty()) ro.input_mode = parse_input_mode(mode);
  read_opt(j, "distortion", ro.distortion);
  read_opt(j, "seed", ro.seed);
  read_opt(j, "keep_records", ro.keep_records);
  return ro;
}

void collect_traces(spinhop_result& res,
                    const std::vector<spinhop::TrialRecord>& records) {
  for (const auto& rec : records)
    if (!rec.report.trace_times.empty())
      res.traces[rec.trial_index] = spinhop::trace_csv(rec.report);
}

}  // namespace

extern "C" {

const char* spinhop_version(void) { return "1.0.0"; }

const char* spinhop_last_error(void) { return g_last_error.c_str(); }

void spinhop_string_free(char* s) { std::free(s); }

spinhop_status spinhop_config_create(spinhop_config** out) {
  if (spinhop_status st = require(out != nullptr, "out must not be null"))
    return st;
  return guarded([&] { *out = new spinhop_config{}; });
}

spinhop_status spinhop_config_from_json(const char* json_text,
                                        spinhop_config** out) {
  if (spinhop_status st = require(out != nullptr && json_text != nullptr,
                                  "json_text and out must not be null"))
    return st;
  return guarded([&] {
    auto cfg = spinhop::parse_config(json_text);
    *out = new spinhop_config{std::move(cfg)};
  });
}

spinhop_status spinhop_config_load_file(const char* path, spinhop_config** out) {
  if (spinhop_status st = require(out != nullptr && path != nullptr,
                                  "path and out must not be null"))
    return st;
  return guarded([&] {
    auto cfg = spinhop::load_config_file(path);
    *out = new spinhop_config{std::move(cfg)};
  });
}

spinhop_status spinhop_config_apply_env(spinhop_config* cfg) {
  if (spinhop_status st = require(cfg != nullptr, "cfg must not be null"))
    return st;
  return guarded([&] { spinhop::apply_env_overrides(cfg->cfg); });
}

spinhop_status spinhop_config_set_seed(spinhop_config* cfg, uint64_t seed) {
  if (spinhop_status st = require(cfg != nullptr, "cfg must not be null"))
    return st;
  cfg->cfg.seed = seed;
  return SPINHOP_OK;
}

spinhop_status spinhop_config_to_json(const spinhop_config* cfg,
                                      char** out_json) {
  if (spinhop_status st = require(cfg != nullptr && out_json != nullptr,
                                  "cfg and out_json must not be null"))
    return st;
  return guarded([&] {
    *out_json = copy_string(spinhop::config_to_json(cfg->cfg).dump(2));
  });
}

void spinhop_config_free(spinhop_config* cfg) { delete cfg; }

spinhop_status spinhop_calibrate_vdw(const spinhop_config* cfg, int n_neurons,
                                     const char* mode, double* out_volts) {
  if (spinhop_status st = require(cfg != nullptr && out_volts != nullptr,
                                  "cfg and out_volts must not be null"))
    return st;
  return guarded([&] {
    const spinhop::RunSettings s = cfg->cfg.to_settings();
    const spinhop::CalibrationMode m =
        mode ? spinhop::parse_calibration_mode(mode) : s.calibration;
    *out_volts = spinhop::calibrate_vdw(s.device, n_neurons, m, s.explicit_v_dw);
  });
}

spinhop_status spinhop_run_recall(const spinhop_config* cfg,
                                  const char* options_json,
                                  spinhop_result** out) {
  if (spinhop_status st = require(cfg != nullptr && out != nullptr,
                                  "cfg and out must not be null"))
    return st;
  return guarded([&] {
    const json j = parse_options(options_json);
    const spinhop::RecallOptions ro = recall_options_from_json(j, cfg->cfg.seed);
    const spinhop::RunSettings s = cfg->cfg.to_settings();
    const spinhop::RecallStats st = spinhop::recall_experiment(ro, s);
    auto res = std::make_unique<spinhop_result>();
    res->json_text = spinhop::recall_stats_to_json(st).dump(2);
    res->csv_text = spinhop::recall_trials_csv(st);
    res->summary = spinhop::recall_summary_line(st);
    collect_traces(*res, st.records);
    *out = res.release();
  });
}

spinhop_status spinhop_run_sweep(const spinhop_config* cfg,
                                 const char* options_json,
                                 spinhop_result** out) {
  if (spinhop_status st = require(cfg != nullptr && out != nullptr,
                                  "cfg and out must not be null"))
    return st;
  return guarded([&] {
    const json j = parse_options(options_json);
    reject_unknown_options(j, {"n_list", "patterns_list", "trials",
                               "input_mode", "distortion", "seed"});
    std::vector<int> n_list{11, 21, 29};
    std::vector<int> patterns_list{1};
    read_opt(j, "n_list", n_list);
    read_opt(j, "patterns_list", patterns_list);
    spinhop::RecallOptions base;
    base.seed = cfg->cfg.seed;
    base.trials = 100;
    read_opt(j, "trials", base.trials);
    std::string mode;
    read_opt(j, "input_mode", mode);
    if (!mode.empty()) base.input_mode = parse_input_mode(mode);
    read_opt(j, "distortion", base.distortion);
    read_opt(j, "seed", base.seed);

    const spinhop::RunSettings s = cfg->cfg.to_settings();
    std::vector<spinhop::RecallStats> runs;
    for (int n : n_list)
      for (int p : patterns_list) {
        spinhop::RecallOptions ro = base;
        ro.n = n;
        ro.n_patterns = p;
        ro.keep_records = false;
        runs.push_back(spinhop::recall_experiment(ro, s));
      }
    auto res = std::make_unique<spinhop_result>();
    res->json_text = spinhop::sweep_results_to_json(runs).dump(2);
    res->csv_text = spinhop::sweep_trials_csv(runs);
    res->summary = spinhop::sweep_summary_line(runs);
    *out = res.release();
  });
}

spinhop_status spinhop_run_image(const spinhop_config* cfg,
                                 const char* options_json,
                                 spinhop_result** out) {
  if (spinhop_status st = require(cfg != nullptr && out != nullptr,
                                  "cfg and out must not be null"))
    return st;
  return guarded([&] {
    const json j = parse_options(options_json);
    reject_unknown_options(
        j, {"image_files", "images", "levels", "trials_per_level", "seed"});
    std::vector<spinhop::BitVec> images;
    std::vector<std::string> files;
    read_opt(j, "image_files", files);
    for (const std::string& f : files)
      images.push_back(spinhop::load_image_file(f));
    std::vector<std::string> inline_images;
    read_opt(j, "images", inline_images);
    for (const std::string& grid : inline_images)
      images.push_back(spinhop::parse_image_grid(grid));
    if (images.empty())
      throw spinhop::ConfigError("image run needs image_files or images");

    spinhop::ImageOptions io;
    io.seed = cfg->cfg.seed;
    io.levels = {0.05, 0.15, 0.25, 0.35, 0.45};
    read_opt(j, "levels", io.levels);
    read_opt(j, "trials_per_level", io.trials_per_level);
    read_opt(j, "seed", io.seed);

    const spinhop::RunSettings s = cfg->cfg.to_settings();
    const auto levels = spinhop::image_experiment(images, io, s);
    auto res = std::make_unique<spinhop_result>();
    res->json_text = spinhop::image_results_to_json(levels).dump(2);
    res->csv_text = spinhop::image_trials_csv(levels);
    res->summary = spinhop::image_summary_line(levels);
    for (const auto& lv : levels) collect_traces(*res, lv.records);
    *out = res.release();
  });
}

spinhop_status spinhop_run_maxcut(const spinhop_config* cfg,
                                  const char* options_json,
                                  spinhop_result** out) {
  if (spinhop_status st = require(cfg != nullptr && out != nullptr,
                                  "cfg and out must not be null"))
    return st;
  return guarded([&] {
    const json j = parse_options(options_json);
    reject_unknown_options(j, {"graph_files", "graphs", "best_known_file"});

    struct Instance {
      std::string name;
      spinhop::Graph graph;
    };
    std::vector<Instance> instances;
    std::vector<std::string> files;
    read_opt(j, "graph_files", files);
    for (const std::string& f : files) {
      std::string name = f;
      const auto slash = name.find_last_of('/');
      if (slash != std::string::npos) name = name.substr(slash + 1);
      const auto dot = name.find_last_of('.');
      if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
      instances.push_back({name, spinhop::load_graph_file(f)});
    }
    if (const auto it = j.find("graphs"); it != j.end()) {
      if (!it->is_array())
        throw spinhop::ConfigError("graphs must be an array of {name, text}");
      for (const json& g : *it) {
        std::string name, text;
        read_opt(g, "name", name);
        read_opt(g, "text", text);
        if (text.empty())
          throw spinhop::ConfigError("inline graph needs a text field");
        instances.push_back({name, spinhop::parse_biqmac(text)});
      }
    }
    if (instances.empty())
      throw spinhop::ConfigError("maxcut run needs graph_files or graphs");

    std::map<std::string, long long> best;
    std::string best_file;
    read_opt(j, "best_known_file", best_file);
    if (!best_file.empty()) best = spinhop::load_best_known_file(best_file);

    const spinhop::RunSettings s = cfg->cfg.to_settings();
    std::vector<spinhop::MaxcutResult> results;
    for (const Instance& inst : instances) {
      std::optional<long long> bk;
      if (const auto it = best.find(inst.name); it != best.end()) bk = it->second;
      results.push_back(spinhop::maxcut_experiment(inst.graph, bk, s, inst.name));
    }
    auto res = std::make_unique<spinhop_result>();
    res->json_text = spinhop::maxcut_results_to_json(results).dump(2);
    res->csv_text = spinhop::maxcut_trials_csv(results);
    res->summary = spinhop::maxcut_summary_line(results);
    for (size_t i = 0; i < results.size(); ++i)
      if (!results[i].report.trace_times.empty())
        res->traces[static_cast<long long>(i)] =
            spinhop::trace_csv(results[i].report);
    *out = res.release();
  });
}

spinhop_status spinhop_result_json(const spinhop_result* res, char** out) {
  if (spinhop_status st = require(res != nullptr && out != nullptr,
                                  "res and out must not be null"))
    return st;
  *out = copy_string(res->json_text);
  return SPINHOP_OK;
}

spinhop_status spinhop_result_trials_csv(const spinhop_result* res, char** out) {
  if (spinhop_status st = require(res != nullptr && out != nullptr,
                                  "res and out must not be null"))
    return st;
  *out = copy_string(res->csv_text);
  return SPINHOP_OK;
}

spinhop_status spinhop_result_trace_csv(const spinhop_result* res,
                                        long long trial_index, char** out) {
  if (spinhop_status st = require(res != nullptr && out != nullptr,
                                  "res and out must not be null"))
    return st;
  const auto it = res->traces.find(trial_index);
  *out = copy_string(it == res->traces.end() ? std::string() : it->second);
  return SPINHOP_OK;
}

spinhop_status spinhop_result_trace_trials(const spinhop_result* res,
                                           long long** out_indices,
                                           int* out_count) {
  if (spinhop_status st =
          require(res != nullptr && out_indices != nullptr && out_count != nullptr,
                  "res, out_indices, out_count must not be null"))
    return st;
  *out_count = static_cast<int>(res->traces.size());
  if (res->traces.empty()) {
    *out_indices = nullptr;
    return SPINHOP_OK;
  }
  auto* arr = static_cast<long long*>(
      std::malloc(res->traces.size() * sizeof(long long)));
  int i = 0;
  for (const auto& [idx, _] : res->traces) arr[i++] = idx;
  *out_indices = arr;
  return SPINHOP_OK;
}

spinhop_status spinhop_result_summary(const spinhop_result* res, char** out) {
  if (spinhop_status st = require(res != nullptr && out != nullptr,
                                  "res and out must not be null"))
    return st;
  *out = copy_string(res->summary);
  return SPINHOP_OK;
}

void spinhop_result_free(spinhop_result* res) { delete res; }

}  // extern "C"
