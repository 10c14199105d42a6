// Command-line front end. Talks to the simulator exclusively through the
// C API in spinhop/spinhop.h; JSON is used only to assemble config and
// option documents.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinhop/spinhop.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalFlags {
  std::string config_path;  // empty or "default" = built-in defaults
  std::string out_dir = ".";
  std::optional<uint64_t> seed;
  std::optional<double> dt_ps;
  std::optional<double> t_max_ns;
  std::optional<int> threads;
  std::optional<int> trace_every;
  bool validate = false;
  bool parity = false;
  bool dump_config = false;
};

int exit_code_for(spinhop_status st) {
  return st == SPINHOP_ERR_NUMERIC ? 2 : 1;
}

int fail(spinhop_status st) {
  std::cerr << "error: " << spinhop_last_error() << "\n";
  return exit_code_for(st);
}

// Managed C-string from the API.
struct ApiString {
  char* ptr = nullptr;
  ~ApiString() { spinhop_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct ConfigHandle {
  spinhop_config* ptr = nullptr;
  ~ConfigHandle() { spinhop_config_free(ptr); }
};

struct ResultHandle {
  spinhop_result* ptr = nullptr;
  ~ResultHandle() { spinhop_result_free(ptr); }
};

// Loads the base config, applies SPINHOP_ env vars, then folds in command
// line overrides by editing the JSON form and re-parsing it.
spinhop_status build_config(const GlobalFlags& g, ConfigHandle& out) {
  ConfigHandle base;
  spinhop_status st =
      (g.config_path.empty() || g.config_path == "default")
          ? spinhop_config_create(&base.ptr)
          : spinhop_config_load_file(g.config_path.c_str(), &base.ptr);
  if (st != SPINHOP_OK) return st;
  if ((st = spinhop_config_apply_env(base.ptr)) != SPINHOP_OK) return st;

  ApiString text;
  if ((st = spinhop_config_to_json(base.ptr, &text.ptr)) != SPINHOP_OK)
    return st;
  json j = json::parse(text.str());
  if (g.seed) j["seed"] = *g.seed;
  if (g.dt_ps) j["sim"]["dt_ps"] = *g.dt_ps;
  if (g.t_max_ns) j["sim"]["t_max_ns"] = *g.t_max_ns;
  if (g.threads) j["threads"] = *g.threads;
  if (g.trace_every) j["sim"]["trace_every_steps"] = *g.trace_every;
  if (g.validate) j["sim"]["validate_each_step"] = true;
  if (g.parity) {
    j["network"]["calibration"] = "eq7";
    j["network"]["literal_branch_count"] = true;
  }
  return spinhop_config_from_json(j.dump().c_str(), &out.ptr);
}

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << path.string() << "\n";
    return false;
  }
  f << text;
  return true;
}

// results.json, trials.csv, and one trace_<trial>.csv per traced trial.
int emit_outputs(const GlobalFlags& g, const ResultHandle& res) {
  std::error_code ec;
  fs::create_directories(g.out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << g.out_dir << "\n";
    return 1;
  }
  const fs::path dir(g.out_dir);

  ApiString js, csv, summary;
  spinhop_status st;
  if ((st = spinhop_result_json(res.ptr, &js.ptr)) != SPINHOP_OK)
    return fail(st);
  if ((st = spinhop_result_trials_csv(res.ptr, &csv.ptr)) != SPINHOP_OK)
    return fail(st);
  if ((st = spinhop_result_summary(res.ptr, &summary.ptr)) != SPINHOP_OK)
    return fail(st);
  if (!write_file(dir / "results.json", js.str())) return 1;
  if (!write_file(dir / "trials.csv", csv.str())) return 1;

  long long* indices = nullptr;
  int count = 0;
  if ((st = spinhop_result_trace_trials(res.ptr, &indices, &count)) !=
      SPINHOP_OK)
    return fail(st);
  for (int i = 0; i < count; ++i) {
    ApiString trace;
    if ((st = spinhop_result_trace_csv(res.ptr, indices[i], &trace.ptr)) !=
        SPINHOP_OK) {
      spinhop_string_free(reinterpret_cast<char*>(indices));
      return fail(st);
    }
    const fs::path p = dir / ("trace_" + std::to_string(indices[i]) + ".csv");
    if (!write_file(p, trace.str())) {
      spinhop_string_free(reinterpret_cast<char*>(indices));
      return 1;
    }
  }
  spinhop_string_free(reinterpret_cast<char*>(indices));

  std::cout << summary.str() << "\n";
  return 0;
}

int run_experiment(const GlobalFlags& g, const json& options,
                   spinhop_status (*runner)(const spinhop_config*, const char*,
                                            spinhop_result**)) {
  ConfigHandle cfg;
  spinhop_status st = build_config(g, cfg);
  if (st != SPINHOP_OK) return fail(st);
  if (g.dump_config) {
    ApiString text;
    if ((st = spinhop_config_to_json(cfg.ptr, &text.ptr)) != SPINHOP_OK)
      return fail(st);
    std::cout << text.str() << "\n";
    return 0;
  }
  ResultHandle res;
  if ((st = runner(cfg.ptr, options.dump().c_str(), &res.ptr)) != SPINHOP_OK)
    return fail(st);
  return emit_outputs(g, res);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous spintronic Hopfield network simulator"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalFlags g;
  app.add_option("--config", g.config_path,
                 "Config file path, or 'default' for built-in defaults");
  app.add_option("--out", g.out_dir, "Output directory (default: .)");
  app.add_option("--seed", g.seed, "Override the run seed");
  app.add_option("--dt-ps", g.dt_ps, "Override the timestep in picoseconds");
  app.add_option("--t-max-ns", g.t_max_ns,
                 "Override the simulation horizon in nanoseconds");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware)");
  app.add_option("--trace-every", g.trace_every,
                 "Record soma positions every k steps (0 = off)");
  app.add_flag("--validate", g.validate,
               "Run per-step circuit audits (slower)");
  app.add_flag("--parity", g.parity,
               "Literal-formula variant: eq7 calibration and N+1 branch count");
  app.add_flag("--dump-config", g.dump_config,
               "Print the effective config as JSON and exit");
  bool show_version = false;
  app.add_flag("--version", show_version, "Print the library version");

  // recall
  auto* recall = app.add_subcommand(
      "recall", "Associative recall trials on random stored patterns");
  int rc_n = 30, rc_patterns = 1;
  long long rc_trials = 100;
  bool rc_exhaustive = false;
  std::string rc_input_mode = "uniform_random";
  double rc_distortion = 0.0;
  recall->add_option("--n", rc_n, "Neuron count");
  recall->add_option("--patterns", rc_patterns, "Stored pattern count");
  recall->add_option("--trials", rc_trials, "Trial count");
  recall->add_flag("--exhaustive", rc_exhaustive,
                   "Sweep every pattern x input pair (n <= 8, 1 pattern)");
  recall->add_option("--input-mode", rc_input_mode,
                     "uniform_random or distorted_stored");
  recall->add_option("--distortion", rc_distortion,
                     "Flip fraction for distorted_stored inputs");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Recall experiments over a grid of sizes and pattern counts");
  std::vector<int> sw_n_list{11, 21, 29};
  std::vector<int> sw_patterns_list{1};
  long long sw_trials = 100;
  std::string sw_input_mode = "uniform_random";
  double sw_distortion = 0.0;
  sweep->add_option("--n-list", sw_n_list, "Neuron counts")
      ->delimiter(',');
  sweep->add_option("--patterns-list", sw_patterns_list, "Pattern counts")
      ->delimiter(',');
  sweep->add_option("--trials", sw_trials, "Trials per grid point");
  sweep->add_option("--input-mode", sw_input_mode,
                    "uniform_random or distorted_stored");
  sweep->add_option("--distortion", sw_distortion,
                    "Flip fraction for distorted_stored inputs");

  // image
  auto* image = app.add_subcommand(
      "image", "Train on binary images, recall under pixel distortion");
  std::vector<std::string> im_files;
  std::vector<double> im_levels{0.05, 0.15, 0.25, 0.35, 0.45};
  long long im_trials = 50;
  image->add_option("--image", im_files, "Image grid file (repeatable)")
      ->required();
  image->add_option("--levels", im_levels, "Distortion fractions")
      ->delimiter(',');
  image->add_option("--trials-per-level", im_trials, "Trials per level");

  // maxcut
  auto* maxcut = app.add_subcommand(
      "maxcut", "Solve max-cut instances with the energy-descent network");
  std::vector<std::string> mc_files;
  std::string mc_best;
  maxcut->add_option("--graph", mc_files, "Graph file (repeatable)")
      ->required();
  maxcut->add_option("--best-known", mc_best,
                     "File of 'name value' reference cuts");

  // calibrate
  auto* calibrate = app.add_subcommand(
      "calibrate", "Print the axon supply voltage for a network size");
  int cal_n = 60;
  std::string cal_mode;
  calibrate->add_option("--n", cal_n, "Neuron count");
  calibrate->add_option("--mode", cal_mode,
                        "balanced, eq6, eq7, eq8, or explicit");

  CLI11_PARSE(app, argc, argv);

  if (show_version) {
    std::cout << spinhop_version() << "\n";
    return 0;
  }

  if (calibrate->parsed()) {
    ConfigHandle cfg;
    spinhop_status st = build_config(g, cfg);
    if (st != SPINHOP_OK) return fail(st);
    if (g.dump_config) {
      ApiString text;
      if ((st = spinhop_config_to_json(cfg.ptr, &text.ptr)) != SPINHOP_OK)
        return fail(st);
      std::cout << text.str() << "\n";
      return 0;
    }
    double v = 0;
    st = spinhop_calibrate_vdw(cfg.ptr, cal_n,
                               cal_mode.empty() ? nullptr : cal_mode.c_str(),
                               &v);
    if (st != SPINHOP_OK) return fail(st);
    std::printf("%.6g V\n", v);
    return 0;
  }

  if (recall->parsed()) {
    json opt{{"n", rc_n},
             {"patterns", rc_patterns},
             {"trials", rc_trials},
             {"exhaustive", rc_exhaustive},
             {"input_mode", rc_input_mode},
             {"distortion", rc_distortion}};
    return run_experiment(g, opt, spinhop_run_recall);
  }
  if (sweep->parsed()) {
    json opt{{"n_list", sw_n_list},
             {"patterns_list", sw_patterns_list},
             {"trials", sw_trials},
             {"input_mode", sw_input_mode},
             {"distortion", sw_distortion}};
    return run_experiment(g, opt, spinhop_run_sweep);
  }
  if (image->parsed()) {
    json opt{{"image_files", im_files},
             {"levels", im_levels},
             {"trials_per_level", im_trials}};
    return run_experiment(g, opt, spinhop_run_image);
  }
  if (maxcut->parsed()) {
    json opt{{"graph_files", mc_files}};
    if (!mc_best.empty()) opt["best_known_file"] = mc_best;
    return run_experiment(g, opt, spinhop_run_maxcut);
  }

  if (g.dump_config) {
    ConfigHandle cfg;
    spinhop_status st = build_config(g, cfg);
    if (st != SPINHOP_OK) return fail(st);
    ApiString text;
    if ((st = spinhop_config_to_json(cfg.ptr, &text.ptr)) != SPINHOP_OK)
      return fail(st);
    std::cout << text.str() << "\n";
    return 0;
  }

  std::cerr << "error: pick a subcommand (recall, sweep, image, maxcut, "
               "calibrate) or pass --dump-config\n";
  return 1;
}
