// Acceptance runner: executes the release checklist and prints one
// "ACCEPTANCE <k> PASS|FAIL - detail" line per criterion. With no arguments
// every criterion runs; otherwise each argument selects one by number.
// Exit status is nonzero if any selected criterion fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "circuit.hpp"
#include "config.hpp"
#include "device.hpp"
#include "graph.hpp"
#include "network.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "tasks.hpp"

using namespace spinhop;

#ifndef SPINHOP_DATA_DIR
#define SPINHOP_DATA_DIR "data"
#endif

namespace {

std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

int hw_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

RunSettings default_settings() {
  RunSettings s = RunConfig{}.to_settings();
  s.threads = hw_threads();
  return s;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale > 0 ? std::fabs(a - b) / scale : 0.0;
}

// --- 1: supply-voltage calibration algebra -------------------------------

bool criterion_1(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  DeviceParams p;
  const double eq7 = calibrate_vdw(p, 60, CalibrationMode::eq7_literal);
  const double bal = calibrate_vdw(p, 60, CalibrationMode::balanced);
  const bool ref_ok =
      rel_diff(eq7, 0.34665) <= 1e-3 && rel_diff(bal, 0.35606) <= 1e-3;

  Rng rng(2026);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    DeviceParams q;
    q.lande_g = 1.5 + rng.uniform01();
    q.polarization = 0.3 + 0.6 * rng.uniform01();
    q.cross_section = (20.0 + 80.0 * rng.uniform01()) * 1e-18;
    q.track_length = (60.0 + 140.0 * rng.uniform01()) * 1e-9;
    q.mtj_width = q.track_length * (0.1 + 0.3 * rng.uniform01());
    q.mtj_placement = 0.25 + 0.5 * rng.uniform01();
    q.msat = 4e5 + 8e5 * rng.uniform01();
    q.soma_leak = 0.05 + rng.uniform01();
    q.axon_leak = -(1.0 + 9.0 * rng.uniform01());
    q.r_parallel = 100.0 + 800.0 * rng.uniform01();
    q.r_antiparallel = 1000.0 + 3000.0 * rng.uniform01();
    q.r_metal = 500.0 + 3500.0 * rng.uniform01();
    q.validate();
    const int n = 3 + static_cast<int>(rng.below(148));
    const double a = calibrate_vdw(q, n, CalibrationMode::eq7_literal);
    const double b = calibrate_vdw(q, n, CalibrationMode::eq8_literal);
    worst = std::max(worst, rel_diff(a, b));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail = fmt("eq7(60)=%.6f V vs 0.34665, balanced(60)=%.6f V vs 0.35606, "
               "max eq7/eq8 rel gap %.1e over 1000 parameter sets, %.2f s",
               eq7, bal, worst, secs);
  return ref_ok && worst < 1e-12 && secs < 1.0;
}

// --- 2: exhaustive odd-N recall -------------------------------------------

bool criterion_2(std::string& detail) {
  RunSettings s = default_settings();
  std::string parts;
  bool ok = true;
  for (int n : {3, 5}) {
    RecallOptions opt;
    opt.n = n;
    opt.exhaustive = true;
    opt.keep_records = false;
    const RecallStats st = recall_experiment(opt, s);
    const long long full =
        std::llround(st.full_recall_rate * static_cast<double>(st.trials));
    ok = ok && st.full_recall_rate == 1.0 && st.converged_rate == 1.0 &&
         st.fault_count == 0;
    parts += fmt("%sN=%d: %lld/%lld pattern-or-inverse", parts.empty() ? "" : "; ",
                 n, full, st.trials);
  }
  detail = parts;
  return ok;
}

// --- 3: even-N equal-split freezing ---------------------------------------

bool criterion_3(std::string& detail) {
  RunSettings s = default_settings();
  RecallOptions opt;
  opt.n = 4;
  opt.exhaustive = true;
  opt.keep_records = false;
  const RecallStats st = recall_experiment(opt, s);
  detail = fmt("N=4 exhaustive (%lld trials): %lld frozen equal-split, "
               "full recall %.1f%%",
               st.trials, st.frozen_count, 100.0 * st.full_recall_rate);
  return st.frozen_count >= 1 && st.full_recall_rate < 1.0;
}

// --- 4: capacity trend over network size ----------------------------------

bool criterion_4(std::string& detail) {
  RunSettings s = default_settings();
  bool ok = true;
  std::string parts;
  for (int n : {11, 21, 29}) {
    RecallOptions opt;
    opt.n = n;
    opt.trials = 100;
    opt.seed = 1;
    opt.keep_records = false;
    const RecallStats st = recall_experiment(opt, s);
    ok = ok && st.full_recall_rate == 1.0;
    parts += fmt("N=%d full=%.0f%%, ", n, 100.0 * st.full_recall_rate);
  }
  RecallOptions opt;
  opt.n = 30;
  opt.n_patterns = 4;
  opt.trials = 500;
  opt.seed = 1;
  opt.keep_records = false;
  const RecallStats st = recall_experiment(opt, s);
  parts += fmt("N=30/4 patterns/500 trials bitwise=%.3f (need >= 0.90)",
               st.bitwise_accuracy);
  detail = parts;
  return ok && st.bitwise_accuracy >= 0.90;
}

// --- 5: image denoising error vs distortion -------------------------------

bool criterion_5(std::string& detail) {
  RunSettings s = default_settings();
  std::vector<BitVec> images;
  for (const char* name : {"halves.txt", "stripes.txt", "checker.txt"})
    images.push_back(
        load_image_file(std::string(SPINHOP_DATA_DIR "/images/") + name));

  ImageOptions opt;
  opt.levels = {0.05, 0.10, 0.15, 0.25, 0.35, 0.45};
  opt.trials_per_level = 50;
  opt.seed = 1;
  opt.keep_records = false;
  const auto levels = image_experiment(images, opt, s);

  bool clean_low = true, monotone = true;
  std::string parts = "mean pixel error";
  for (size_t i = 0; i < levels.size(); ++i) {
    parts += fmt(" %g%%:%.2f", 100.0 * levels[i].distortion,
                 levels[i].mean_pixel_error);
    if (levels[i].distortion <= 0.10 + 1e-12 && levels[i].mean_pixel_error != 0.0)
      clean_low = false;
    if (i > 0 && levels[i].mean_pixel_error < levels[i - 1].mean_pixel_error)
      monotone = false;
  }
  const bool rises = levels.back().mean_pixel_error > levels.front().mean_pixel_error;
  detail = parts + fmt(" | clean<=10%%:%s monotone:%s rises:%s",
                       clean_low ? "yes" : "no", monotone ? "yes" : "no",
                       rises ? "yes" : "no");
  return clean_low && monotone && rises;
}

// --- 6: max-cut quality on the benchmark fixtures -------------------------

bool criterion_6(std::string& detail) {
  RunSettings s = default_settings();
  const std::string dir = SPINHOP_DATA_DIR "/graphs/";
  const auto best = load_best_known_file(dir + "best_known.txt");

  double ratio_sum = 0;
  long long cut_sum = 0, best_sum = 0;
  for (int i = 0; i < 10; ++i) {
    const std::string name = fmt("g05_60.%d", i);
    const Graph g = load_graph_file(dir + name + ".txt");
    const MaxcutResult r = maxcut_experiment(g, best.at(name), s, name);
    if (r.fault) {
      detail = name + ": numeric fault";
      return false;
    }
    ratio_sum += r.ratio;
    cut_sum += r.cut;
    best_sum += r.best_known;
  }
  const double g05_mean = ratio_sum / 10.0;
  const double g05_aggregate =
      static_cast<double>(cut_sum) / static_cast<double>(best_sum);

  double small_sum = 0;
  int small_count = 0;
  for (int n : {6, 8, 10, 12, 14, 16}) {
    const std::string name = fmt("small_%02d", n);
    const Graph g = load_graph_file(dir + name + ".txt");
    const long long opt = brute_force_max_cut(g).first;
    const MaxcutResult r = maxcut_experiment(g, opt, s, name);
    if (r.fault) {
      detail = name + ": numeric fault";
      return false;
    }
    small_sum += r.ratio;
    ++small_count;
  }
  const double small_mean = small_sum / small_count;

  detail = fmt("g05_60 mean ratio %.4f (aggregate %.4f, need >= 0.88); "
               "small-suite mean ratio vs optimum %.4f (need >= 0.95)",
               g05_mean, g05_aggregate, small_mean);
  return g05_mean >= 0.88 && small_mean >= 0.95;
}

// --- 7: convergence-time and energy envelopes -----------------------------

bool criterion_7(std::string& detail) {
  RunSettings s = default_settings();

  RecallOptions opt;
  opt.n = 60;
  opt.n_patterns = 4;
  opt.trials = 100;
  opt.seed = 1;
  opt.keep_records = false;
  const RecallStats st = recall_experiment(opt, s);
  const double t_ns = st.mean_t_converge * 1e9;
  const double e_nj = st.mean_energy * 1e9;
  const double chargeup_nj = st.mean_chargeup_energy * 1e9;
  const double share = chargeup_nj / (chargeup_nj + e_nj);
  const bool assoc_ok = t_ns >= 25.0 && t_ns <= 250.0 && e_nj >= 2.0 && e_nj <= 25.0;

  const std::string dir = SPINHOP_DATA_DIR "/graphs/";
  const auto best = load_best_known_file(dir + "best_known.txt");
  double mc_t_sum = 0, mc_e_sum = 0;
  int converged = 0;
  for (int i = 0; i < 10; ++i) {
    const std::string name = fmt("g05_60.%d", i);
    const Graph g = load_graph_file(dir + name + ".txt");
    const MaxcutResult r = maxcut_experiment(g, best.at(name), s, name);
    if (r.fault || !r.report.converged) continue;
    mc_t_sum += r.report.t_converge;
    mc_e_sum += r.report.energy_total;
    ++converged;
  }
  const double mc_t_ns = converged ? mc_t_sum / converged * 1e9 : 0.0;
  const double mc_e_nj = converged ? mc_e_sum / converged * 1e9 : 0.0;
  const bool mc_ok = converged > 0 && mc_t_ns >= 100.0 && mc_t_ns <= 1100.0 &&
                     mc_e_nj >= 7.0 && mc_e_nj <= 70.0;

  detail = fmt("associative N=60/4 patterns/100 trials: mean t=%.1f ns "
               "(window 25-250), mean E=%.2f nJ (window 2-25), charge-up share "
               "%.1f%% of total; max-cut (%d/10 converged): mean t=%.0f ns "
               "(window 100-1100), mean E=%.1f nJ (window 7-70)",
               t_ns, e_nj, 100.0 * share, converged, mc_t_ns, mc_e_nj);
  return assoc_ok && mc_ok;
}

// --- 8: physics invariants -------------------------------------------------

bool criterion_8(std::string& detail) {
  DeviceParams params;
  Rng rng(808);

  // Audited run: KCL and power-balance residuals stay at rounding scale.
  double worst_kcl = 0, worst_power = 0;
  {
    const int n = 8;
    std::vector<BitVec> pats;
    for (int k = 0; k < 2; ++k) {
      BitVec p(static_cast<size_t>(n));
      for (auto& b : p) b = rng.coin();
      pats.push_back(p);
    }
    const WeightMatrix w = train_hebbian(pats, 0.1, false);
    const double v_dw = calibrate_vdw(params, n, CalibrationMode::balanced);
    Network net = Network::init_all_antiparallel(params, w, v_dw);
    SimOptions so;
    so.validate_each_step = true;
    BitVec input(static_cast<size_t>(n));
    for (auto& b : input) b = rng.coin();
    net.charge_up(input, 0.25, so);
    const TrialReport rep = net.release_and_converge(so);
    if (!rep.validated) {
      detail = "validating integrator did not report audit results";
      return false;
    }
    worst_kcl = rep.max_kcl_residual_rel;
    worst_power = rep.max_power_residual_rel;
  }
  const bool audit_ok = worst_kcl < 1e-15 && worst_power < 1e-6;

  // Cumulative energy meters never decrease as the horizon grows.
  bool energy_ok = true;
  {
    const WeightMatrix w =
        train_hebbian(std::vector<BitVec>{{1, 0, 1, 0, 1, 1}}, 0.1, false);
    const double v_dw = calibrate_vdw(params, 6, CalibrationMode::balanced);
    EnergyByClass prev{};
    for (double t_max : {20e-9, 40e-9, 80e-9}) {
      Network net = Network::init_all_antiparallel(params, w, v_dw);
      SimOptions so;
      so.t_max = t_max;
      so.hold_window = 1.0;  // run the whole horizon
      net.charge_up({0, 1, 1, 0, 0, 1}, 0.25, so);
      net.release_and_converge(so);
      const EnergyByClass e = net.energy();
      energy_ok = energy_ok && e.weights >= prev.weights && e.vdw >= prev.vdw &&
                  e.vc >= prev.vc && e.weights >= 0 && e.vdw >= 0 && e.vc >= 0;
      prev = e;
    }
  }

  // Walls stay on the track under arbitrary velocity sequences.
  bool clamp_ok = true;
  for (int d = 0; d < 200 && clamp_ok; ++d) {
    double pos = rng.uniform01() * params.track_length;
    for (int s = 0; s < 500; ++s) {
      const double v = (rng.uniform01() - 0.5) * 4000.0;
      pos = step_position(pos, v, 1e-12, params.track_length);
      if (!(pos >= 0.0 && pos <= params.track_length)) {
        clamp_ok = false;
        break;
      }
    }
  }

  // Read conductance rises monotonically with wall position.
  bool mono_ok = true;
  double prev_g = -1.0;
  for (int i = 0; i <= 2000; ++i) {
    const double pos = params.track_length * i / 2000.0;
    const double g = mtj_conductance(pos, params);
    if (g < prev_g) {
      mono_ok = false;
      break;
    }
    prev_g = g;
  }

  // Bit-identical reruns under a fixed seed, worker count notwithstanding.
  bool det_ok = true;
  {
    RunSettings s = default_settings();
    RecallOptions opt;
    opt.n = 10;
    opt.trials = 20;
    opt.seed = 9;
    s.threads = 1;
    const RecallStats a = recall_experiment(opt, s);
    s.threads = hw_threads();
    const RecallStats b = recall_experiment(opt, s);
    det_ok = a.records.size() == b.records.size();
    for (size_t i = 0; det_ok && i < a.records.size(); ++i) {
      const TrialReport& ra = a.records[i].report;
      const TrialReport& rb = b.records[i].report;
      det_ok = ra.final_bits == rb.final_bits && ra.t_converge == rb.t_converge &&
               ra.energy_total == rb.energy_total && ra.steps == rb.steps;
    }
  }

  // Halving the timestep must not move the answer.
  bool dt_ok = true;
  double worst_dt_shift = 0;
  {
    RunSettings coarse = default_settings();
    RunSettings fine = coarse;
    fine.sim.dt = coarse.sim.dt / 2.0;
    RecallOptions opt;
    opt.n = 10;
    opt.trials = 10;
    opt.seed = 5;
    const RecallStats a = recall_experiment(opt, coarse);
    const RecallStats b = recall_experiment(opt, fine);
    dt_ok = a.records.size() == b.records.size();
    for (size_t i = 0; dt_ok && i < a.records.size(); ++i) {
      const TrialReport& ra = a.records[i].report;
      const TrialReport& rb = b.records[i].report;
      if (ra.final_bits != rb.final_bits || !ra.converged || !rb.converged) {
        dt_ok = false;
        break;
      }
      const double shift = rel_diff(ra.t_converge, rb.t_converge);
      worst_dt_shift = std::max(worst_dt_shift, shift);
    }
    dt_ok = dt_ok && worst_dt_shift <= 0.01;
  }

  detail = fmt("kcl residual %.1e (<1e-15), power residual %.1e (<1e-6), energy monotone:%s, "
               "clamping:%s, conductance monotone:%s, determinism:%s, "
               "dt halving: bits stable, max t shift %.3f%% (<1%%)",
               worst_kcl, worst_power, energy_ok ? "yes" : "no",
               clamp_ok ? "yes" : "no", mono_ok ? "yes" : "no",
               det_ok ? "yes" : "no", 100.0 * worst_dt_shift);
  return audit_ok && energy_ok && clamp_ok && mono_ok && det_ok && dt_ok;
}

// --- 9: discrete reference-model oracle ------------------------------------

bool criterion_9(std::string& detail) {
  Rng rng(909);

  // Energy is a Lyapunov function of the asynchronous sweep.
  bool lyapunov_ok = true;
  for (int trial = 0; trial < 1000 && lyapunov_ok; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(18));
    WeightMatrix w(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double v = (rng.uniform01() - 0.5) * 2.0;
        w.set(i, j, v);
        w.set(j, i, v);
      }
    OracleNet net(std::move(w), (rng.uniform01() - 0.5));
    net.state.assign(static_cast<size_t>(n), 0);
    for (auto& b : net.state) b = rng.coin();
    double e = hopfield_energy(net);
    for (int sweep = 0; sweep < 200; ++sweep) {
      std::vector<int> order;
      for (size_t v : rng.permutation(static_cast<size_t>(n)))
        order.push_back(static_cast<int>(v));
      const int flips = oracle_sweep(net, order);
      const double e2 = hopfield_energy(net);
      if (e2 > e + 1e-12 || (flips > 0 && !(e2 < e))) {
        lyapunov_ok = false;
        break;
      }
      e = e2;
      if (flips == 0) break;
    }
    lyapunov_ok = lyapunov_ok && oracle_is_fixed_point(net);
  }

  // Stored patterns (and their complements) are fixed points.
  bool fixed_ok = true;
  for (int trial = 0; trial < 500 && fixed_ok; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(20));
    BitVec p(static_cast<size_t>(n));
    for (auto& b : p) b = rng.coin();
    OracleNet net(train_hebbian(std::vector<BitVec>{p}, 0.1, false));
    net.state = p;
    fixed_ok = oracle_is_fixed_point(net);
    for (auto& b : net.state) b ^= 1;
    fixed_ok = fixed_ok && oracle_is_fixed_point(net);
  }

  // Exhaustive basins: from every start state the oracle lands on one of the
  // exhaustively enumerated fixed points, never uphill from where it began.
  bool basin_ok = true;
  for (int n : {3, 4, 5}) {
    BitVec p(static_cast<size_t>(n));
    for (auto& b : p) b = rng.coin();
    const WeightMatrix w = train_hebbian(std::vector<BitVec>{p}, 0.1, false);

    std::vector<BitVec> fixed_points;
    for (int mask = 0; mask < (1 << n); ++mask) {
      OracleNet probe(w);
      probe.state.assign(static_cast<size_t>(n), 0);
      for (int i = 0; i < n; ++i)
        probe.state[static_cast<size_t>(i)] = (mask >> i) & 1;
      if (oracle_is_fixed_point(probe)) fixed_points.push_back(probe.state);
    }

    for (int mask = 0; mask < (1 << n) && basin_ok; ++mask) {
      OracleNet net(w);
      net.state.assign(static_cast<size_t>(n), 0);
      for (int i = 0; i < n; ++i)
        net.state[static_cast<size_t>(i)] = (mask >> i) & 1;
      const double e_start = hopfield_energy(net);
      Rng walk(1000 + static_cast<uint64_t>(mask));
      oracle_converge(net, walk);
      bool landed = false;
      for (const BitVec& f : fixed_points) landed = landed || net.state == f;
      basin_ok = landed && hopfield_energy(net) <= e_start + 1e-12;
    }
  }

  detail = fmt("lyapunov over 1000 random nets:%s; stored patterns fixed "
               "(500 nets):%s; exhaustive basins N<=5 land on enumerated fixed "
               "points:%s",
               lyapunov_ok ? "yes" : "no", fixed_ok ? "yes" : "no",
               basin_ok ? "yes" : "no");
  return lyapunov_ok && fixed_ok && basin_ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<bool(std::string&)>> criteria{
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3},
      {4, criterion_4}, {5, criterion_5}, {6, criterion_6},
      {7, criterion_7}, {8, criterion_8}, {9, criterion_9},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "all") continue;
    const int k = std::atoi(arg.c_str());
    if (k < 1 || k > 9) {
      std::fprintf(stderr, "usage: %s [1..9 | all]...\n", argv[0]);
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (const auto& [k, fn] : criteria) selected.push_back(k);

  int failures = 0;
  for (int k : selected) {
    std::string detail;
    bool pass = false;
    try {
      pass = criteria.at(k)(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("ACCEPTANCE %d %s - %s\n", k, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
