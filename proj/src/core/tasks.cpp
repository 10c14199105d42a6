#include "tasks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "errors.hpp"

namespace spinhop {
namespace {

int count_matches(const BitVec& a, const BitVec& b) {
  int m = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if ((a[i] != 0) == (b[i] != 0)) ++m;
  return m;
}

// Runs trial bodies over a small worker pool. Records land in index order, so
// aggregation never depends on thread scheduling.
void run_parallel(long long trials, int threads, std::vector<TrialRecord>& out,
                  const std::function<TrialRecord(long long)>& body) {
  out.assign(static_cast<size_t>(trials), TrialRecord{});
  threads = std::clamp(threads, 1, 256);
  if (threads == 1 || trials <= 1) {
    for (long long t = 0; t < trials; ++t) out[static_cast<size_t>(t)] = body(t);
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr first_error;
  std::mutex error_lock;
  auto worker = [&] {
    for (;;) {
      const long long t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        out[static_cast<size_t>(t)] = body(t);
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_lock);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

SimOptions sim_for_trial(const RunSettings& s, long long t) {
  SimOptions o = s.sim;
  if (o.trace_every_steps > 0 && !s.trace_trials.empty() &&
      std::find(s.trace_trials.begin(), s.trace_trials.end(), t) ==
          s.trace_trials.end())
    o.trace_every_steps = 0;
  return o;
}

TrialRecord run_recall_trial(long long index,
                             const std::vector<BitVec>& patterns,
                             const BitVec& input, int source_pattern,
                             double v_dw, const RunSettings& s) {
  TrialRecord rec;
  rec.trial_index = index;
  rec.source_pattern = source_pattern;
  rec.input = input;
  const SimOptions sim = sim_for_trial(s, index);
  try {
    WeightMatrix w = train_hebbian(patterns, s.w_mag, s.normalize_weights);
    Network net = Network::init_all_antiparallel(s.device, std::move(w), v_dw,
                                                 s.literal_branch_count);
    net.charge_up(input, s.v_c, sim);
    rec.report = net.release_and_converge(sim);
    rec.accuracy = bitwise_accuracy(rec.report.final_bits, patterns);
    for (const BitVec& p : patterns)
      if (is_pattern_or_inverse(rec.report.final_bits, p)) {
        rec.full_recall = true;
        break;
      }
    // Settled exactly halfway between every stored pattern and its inverse:
    // the best match fraction is exactly 1/2 (possible only for even n).
    rec.equal_split_frozen =
        !rec.full_recall && rec.report.converged && rec.accuracy == 0.5;
  } catch (const NumericFault&) {
    rec.fault = true;
  }
  return rec;
}

// Stored sets with a repeated or complementary pair train degenerate
// matrices, so redraw until the set is clean.
std::vector<BitVec> draw_pattern_set(Rng& rng, int n, int count) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<BitVec> set;
    set.reserve(count);
    for (int p = 0; p < count; ++p) set.push_back(rng.bits(static_cast<size_t>(n)));
    bool clean = true;
    for (size_t a = 0; a < set.size() && clean; ++a)
      for (size_t b = a + 1; b < set.size() && clean; ++b) {
        const int m = count_matches(set[a], set[b]);
        if (m == n || m == 0) clean = false;
      }
    if (clean) return set;
  }
  throw std::invalid_argument(
      "could not draw a non-degenerate stored set; too many patterns for n");
}

BitVec bits_of(uint64_t value, int n) {
  BitVec v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = (value >> i) & 1u;
  return v;
}

}  // namespace

double resolve_v_dw(const RunSettings& s, int n) {
  return calibrate_vdw(s.device, n, s.calibration, s.explicit_v_dw);
}

int hamming_distance(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("bit vectors differ in length");
  return static_cast<int>(a.size()) - count_matches(a, b);
}

BitVec distort(const BitVec& pattern, double fraction, Rng& rng) {
  if (!(fraction >= 0.0 && fraction <= 0.5))
    throw std::invalid_argument("distortion fraction must lie in [0, 0.5]");
  BitVec out = pattern;
  const size_t k = static_cast<size_t>(
      std::llround(fraction * static_cast<double>(pattern.size())));
  for (size_t i : rng.sample_without_replacement(pattern.size(), k))
    out[i] = out[i] ? 0 : 1;
  return out;
}

double bitwise_accuracy(const BitVec& output,
                        std::span<const BitVec> stored_patterns) {
  if (stored_patterns.empty())
    throw std::invalid_argument("need at least one stored pattern");
  const int n = static_cast<int>(output.size());
  int best = 0;
  for (const BitVec& p : stored_patterns) {
    if (p.size() != output.size())
      throw std::invalid_argument("pattern length does not match output");
    const int m = count_matches(output, p);
    best = std::max({best, m, n - m});
  }
  return static_cast<double>(best) / static_cast<double>(n);
}

bool is_pattern_or_inverse(const BitVec& output, const BitVec& pattern) {
  if (output.size() != pattern.size()) return false;
  const int m = count_matches(output, pattern);
  return m == 0 || m == static_cast<int>(output.size());
}

RecallStats recall_experiment(const RecallOptions& opt, const RunSettings& s) {
  if (opt.n < 3) throw std::invalid_argument("recall needs n >= 3");
  if (opt.n_patterns < 1) throw std::invalid_argument("need >= 1 stored pattern");
  if (!(opt.distortion >= 0.0 && opt.distortion <= 0.5))
    throw std::invalid_argument("distortion fraction must lie in [0, 0.5]");

  long long trials = opt.trials;
  if (opt.exhaustive) {
    if (opt.n > 8)
      throw std::invalid_argument("exhaustive sweep supports n <= 8");
    if (opt.n_patterns != 1)
      throw std::invalid_argument("exhaustive sweep stores a single pattern");
    trials = (1LL << opt.n) * (1LL << opt.n);
  }
  if (trials < 1) throw std::invalid_argument("need at least one trial");

  const double v_dw = resolve_v_dw(s, opt.n);

  RecallStats st;
  st.n = opt.n;
  st.n_patterns = opt.n_patterns;
  st.trials = trials;
  const double w_peak =
      s.normalize_weights ? s.w_mag : s.w_mag * static_cast<double>(opt.n_patterns);
  st.v_c_below_weights = s.v_c < w_peak;

  run_parallel(trials, s.threads, st.records, [&](long long t) {
    if (opt.exhaustive) {
      const uint64_t mask = (1ull << opt.n) - 1;
      const std::vector<BitVec> patterns{
          bits_of(static_cast<uint64_t>(t) >> opt.n, opt.n)};
      const BitVec input = bits_of(static_cast<uint64_t>(t) & mask, opt.n);
      return run_recall_trial(t, patterns, input, -1, v_dw, s);
    }
    Rng rng = Rng(opt.seed).split(static_cast<uint64_t>(t));
    const std::vector<BitVec> patterns = draw_pattern_set(rng, opt.n, opt.n_patterns);
    BitVec input;
    int source = -1;
    if (opt.input_mode == InputMode::uniform_random) {
      input = rng.bits(static_cast<size_t>(opt.n));
    } else {
      source = static_cast<int>(rng.below(static_cast<uint64_t>(opt.n_patterns)));
      input = distort(patterns[static_cast<size_t>(source)], opt.distortion, rng);
    }
    return run_recall_trial(t, patterns, input, source, v_dw, s);
  });

  long long full = 0, converged = 0, faults = 0, frozen = 0;
  double acc_sum = 0, t_conv_sum = 0, e_sum = 0, t_chg_sum = 0, e_chg_sum = 0,
         p_sum = 0;
  for (const TrialRecord& r : st.records) {
    if (r.fault) {
      ++faults;
      continue;
    }
    acc_sum += r.accuracy;
    t_chg_sum += r.report.t_chargeup;
    e_chg_sum += r.report.chargeup_energy.total();
    if (r.full_recall) ++full;
    if (r.equal_split_frozen) ++frozen;
    if (r.report.converged) {
      ++converged;
      t_conv_sum += r.report.t_converge;
      e_sum += r.report.energy_total;
      p_sum += r.report.avg_power;
    }
  }
  const long long ok = trials - faults;
  st.full_recall_rate = static_cast<double>(full) / static_cast<double>(trials);
  st.bitwise_accuracy = ok > 0 ? acc_sum / static_cast<double>(ok) : 0.0;
  st.converged_rate = static_cast<double>(converged) / static_cast<double>(trials);
  st.mean_t_converge = converged > 0 ? t_conv_sum / static_cast<double>(converged) : 0.0;
  st.mean_energy = converged > 0 ? e_sum / static_cast<double>(converged) : 0.0;
  st.mean_avg_power = converged > 0 ? p_sum / static_cast<double>(converged) : 0.0;
  st.mean_t_chargeup = ok > 0 ? t_chg_sum / static_cast<double>(ok) : 0.0;
  st.mean_chargeup_energy = ok > 0 ? e_chg_sum / static_cast<double>(ok) : 0.0;
  st.frozen_count = frozen;
  st.fault_count = faults;
  if (!opt.keep_records) st.records.clear();
  return st;
}

std::vector<ImageLevelResult> image_experiment(const std::vector<BitVec>& images,
                                               const ImageOptions& opt,
                                               const RunSettings& s) {
  if (images.empty()) throw std::invalid_argument("need at least one image");
  const size_t n = images[0].size();
  if (n < 2) throw std::invalid_argument("images need at least two pixels");
  for (const BitVec& img : images)
    if (img.size() != n)
      throw std::invalid_argument("images must all have the same pixel count");
  if (opt.trials_per_level < 1)
    throw std::invalid_argument("need at least one trial per level");
  for (double lv : opt.levels)
    if (!(lv >= 0.0 && lv <= 0.5))
      throw std::invalid_argument("distortion levels must lie in [0, 0.5]");

  const double v_dw = resolve_v_dw(s, static_cast<int>(n));
  const WeightMatrix trained = train_hebbian(images, s.w_mag, s.normalize_weights);

  std::vector<ImageLevelResult> out;
  out.reserve(opt.levels.size());
  for (size_t li = 0; li < opt.levels.size(); ++li) {
    const double level = opt.levels[li];
    ImageLevelResult res;
    res.distortion = level;
    res.trials = opt.trials_per_level;

    run_parallel(opt.trials_per_level, s.threads, res.records, [&](long long t) {
      TrialRecord rec;
      rec.trial_index = t;
      const int img_idx = static_cast<int>(t % static_cast<long long>(images.size()));
      rec.source_pattern = img_idx;
      const uint64_t stream =
          static_cast<uint64_t>(li) * static_cast<uint64_t>(opt.trials_per_level) +
          static_cast<uint64_t>(t);
      Rng rng = Rng(opt.seed).split(stream);
      const BitVec& truth = images[static_cast<size_t>(img_idx)];
      rec.input = distort(truth, level, rng);
      const SimOptions sim = sim_for_trial(s, t);
      try {
        Network net = Network::init_all_antiparallel(s.device, trained, v_dw,
                                                     s.literal_branch_count);
        net.charge_up(rec.input, s.v_c, sim);
        rec.report = net.release_and_converge(sim);
        const int d = hamming_distance(rec.report.final_bits, truth);
        rec.pixel_error = std::min(d, static_cast<int>(n) - d);
        rec.accuracy = bitwise_accuracy(rec.report.final_bits, images);
        rec.full_recall = is_pattern_or_inverse(rec.report.final_bits, truth);
      } catch (const NumericFault&) {
        rec.fault = true;
      }
      return rec;
    });

    long long faults = 0, converged = 0;
    double err_sum = 0, t_sum = 0, e_sum = 0;
    for (const TrialRecord& r : res.records) {
      if (r.fault) {
        ++faults;
        continue;
      }
      err_sum += r.pixel_error;
      res.max_pixel_error = std::max(res.max_pixel_error, r.pixel_error);
      if (r.report.converged) {
        ++converged;
        t_sum += r.report.t_converge;
        e_sum += r.report.energy_total;
      }
    }
    const long long ok = opt.trials_per_level - faults;
    res.mean_pixel_error = ok > 0 ? err_sum / static_cast<double>(ok) : 0.0;
    res.mean_t_converge = converged > 0 ? t_sum / static_cast<double>(converged) : 0.0;
    res.mean_energy = converged > 0 ? e_sum / static_cast<double>(converged) : 0.0;
    res.fault_count = faults;
    if (!opt.keep_records) res.records.clear();
    out.push_back(std::move(res));
  }
  return out;
}

MaxcutResult maxcut_experiment(const Graph& g,
                               std::optional<long long> best_known,
                               const RunSettings& s,
                               const std::string& instance_name) {
  g.validate();
  if (g.n_nodes < 2)
    throw std::invalid_argument("max-cut needs at least two nodes");

  MaxcutResult res;
  res.instance = instance_name;
  if (best_known) res.best_known = *best_known;
  const double v_dw = resolve_v_dw(s, g.n_nodes);
  try {
    WeightMatrix w = weights_for_maxcut(g, s.w_mag, s.maxcut_penalty);
    Network net = Network::init_all_antiparallel(s.device, std::move(w), v_dw,
                                                 s.literal_branch_count);
    res.report = net.release_and_converge(s.sim);
    res.partition = res.report.final_bits;
    res.cut = cut_value(g, res.partition);
    if (g.edges.empty())
      res.ratio = 1.0;
    else if (res.best_known > 0)
      res.ratio = static_cast<double>(res.cut) / static_cast<double>(res.best_known);
  } catch (const NumericFault&) {
    res.fault = true;
  }
  return res;
}

std::pair<long long, BitVec> brute_force_max_cut(const Graph& g) {
  g.validate();
  if (g.n_nodes > 24)
    throw std::invalid_argument("exhaustive max-cut supports n <= 24");
  const int n = g.n_nodes;
  long long best = 0;
  uint64_t best_mask = 0;
  // Node n-1 stays on side 0; inverting a partition never changes the cut.
  const uint64_t limit = n > 1 ? (1ull << (n - 1)) : 1;
  for (uint64_t mask = 0; mask < limit; ++mask) {
    long long cut = 0;
    for (const Graph::Edge& e : g.edges)
      if (((mask >> e.u) & 1u) != ((mask >> e.v) & 1u)) cut += e.weight;
    if (cut > best) {
      best = cut;
      best_mask = mask;
    }
  }
  BitVec part(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) part[static_cast<size_t>(i)] = (best_mask >> i) & 1u;
  return {best, part};
}

BitVec parse_image_grid(const std::string& text) {
  BitVec bits;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::string row = line.substr(first);
    if (width == 0)
      width = row.size();
    else if (row.size() != width)
      throw ParseError("image rows must all have the same width", line_no);
    for (char c : row) {
      if (c == '0') bits.push_back(0);
      else if (c == '1') bits.push_back(1);
      else throw ParseError("image rows may contain only '0' and '1'", line_no);
    }
  }
  if (bits.empty()) throw ParseError("empty image grid", line_no);
  return bits;
}

BitVec load_image_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open image file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_image_grid(buf.str());
}

}  // namespace spinhop
