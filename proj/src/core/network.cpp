#include "network.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "errors.hpp"
#include "kahan.hpp"

namespace spinhop {
namespace {

// One Newton refinement of q = num/den using an exact FMA residual. Brings the
// node-voltage defect num - q*den from ~eps*|num| down to ~eps^2, which keeps
// the per-node current imbalance far below the audit threshold even when the
// branch currents nearly cancel.
inline double refined_div(double num, double den) {
  const double q = num / den;
  const double r = std::fma(-q, den, num);
  return q + r / den;
}

long long steps_for(double duration, double dt) {
  if (duration <= 0) return 0;
  return static_cast<long long>(std::ceil(duration / dt - 1e-9));
}

void check_options(const SimOptions& opt) {
  if (!(opt.dt > 0) || !std::isfinite(opt.dt))
    throw std::invalid_argument("dt must be a positive finite time step");
  if (!(opt.t_max >= opt.dt))
    throw std::invalid_argument("t_max must cover at least one step");
  if (!(opt.hold_window >= 0) || !(opt.chargeup_t_cap >= 0))
    throw std::invalid_argument("time windows must be non-negative");
  if (!(opt.pin_tolerance > 0))
    throw std::invalid_argument("pin_tolerance must be positive");
  if (opt.trace_every_steps < 0)
    throw std::invalid_argument("trace_every_steps must be non-negative");
}

}  // namespace

WeightMatrix::WeightMatrix(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("weight matrix needs at least one row");
  w_.assign(static_cast<size_t>(n) * n, 0.0);
}

void WeightMatrix::set(int i, int j, double v) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::invalid_argument("weight index out of range");
  if (i == j && v != 0.0)
    throw std::invalid_argument("diagonal weights must stay zero");
  if (!std::isfinite(v)) throw std::invalid_argument("weight must be finite");
  w_[static_cast<size_t>(i) * n_ + j] = v;
}

double WeightMatrix::max_abs() const {
  double m = 0;
  for (double v : w_) m = std::max(m, std::fabs(v));
  return m;
}

WeightMatrix train_hebbian(std::span<const BitVec> patterns, double w_mag,
                           bool normalize) {
  if (patterns.empty())
    throw std::invalid_argument("training needs at least one pattern");
  const size_t n = patterns[0].size();
  if (n < 2) throw std::invalid_argument("patterns need at least two bits");
  for (const BitVec& p : patterns)
    if (p.size() != n)
      throw std::invalid_argument("patterns must all have the same length");
  if (!(w_mag > 0) || !std::isfinite(w_mag))
    throw std::invalid_argument("w_mag must be a positive voltage");

  WeightMatrix w(static_cast<int>(n));
  const double scale =
      normalize ? w_mag / static_cast<double>(patterns.size()) : w_mag;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      long long acc = 0;  // exact bipolar outer-product sum
      for (const BitVec& p : patterns) {
        const int si = p[i] ? 1 : -1;
        const int sj = p[j] ? 1 : -1;
        acc += si * sj;
      }
      const double v = scale * static_cast<double>(acc);
      w.set(static_cast<int>(i), static_cast<int>(j), v);
      w.set(static_cast<int>(j), static_cast<int>(i), v);
    }
  }
  return w;
}

WeightMatrix weights_for_maxcut(const Graph& g, double w_mag, double penalty) {
  g.validate();
  if (g.n_nodes < 2)
    throw std::invalid_argument("max-cut embedding needs at least two nodes");
  if (!(w_mag > 0) || !std::isfinite(w_mag))
    throw std::invalid_argument("w_mag must be a positive voltage");
  if (!(penalty > 0) || !std::isfinite(penalty))
    throw std::invalid_argument("penalty factor must be positive");

  WeightMatrix w(g.n_nodes);
  for (int i = 0; i < g.n_nodes; ++i)
    for (int j = 0; j < g.n_nodes; ++j)
      if (i != j) w.set(i, j, w_mag);
  for (const Graph::Edge& e : g.edges) {
    w.set(e.u, e.v, -penalty * w_mag);
    w.set(e.v, e.u, -penalty * w_mag);
  }
  return w;
}

Network::Network(const DeviceParams& params, WeightMatrix weights, double v_dw,
                 bool literal_branch_count)
    : n_(weights.size()), params_(params), weights_(std::move(weights)), v_dw_(v_dw) {
  params_.validate();
  if (n_ < 2) throw std::invalid_argument("network needs at least two neurons");
  if (!(v_dw >= 0) || !std::isfinite(v_dw))
    throw std::invalid_argument("v_dw must be a non-negative voltage");
  k_ = mobility_k(params_);
  branch_count_ = literal_branch_count ? n_ + 1 : n_ - 1;

  const size_t n = static_cast<size_t>(n_);
  w_in_.resize(n * n);
  w2_in_.resize(n * n);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double v = weights_.at(j, i);  // weight feeding neuron i from j
      w_in_[n * i + j] = v;
      w2_in_[n * i + j] = v * v;
    }
  }

  soma_pos_.assign(n, 0.0);
  axon_pos_.assign(n * (n - 1), 0.0);
  clamp_v_.assign(n, 0.0);
  target_pos_.assign(n, 0.0);
  g_row_.assign(n, 0.0);
  g_axon_.assign(n * (n - 1), 0.0);
  drive_i_.assign(n, 0.0);
}

Network Network::init_all_antiparallel(const DeviceParams& params,
                                       WeightMatrix weights, double v_dw,
                                       bool literal_branch_count) {
  return Network(params, std::move(weights), v_dw, literal_branch_count);
}

double Network::axon_position(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i == j)
    throw std::invalid_argument("axon replica index out of range");
  const int col = (j < i) ? j : j - 1;
  return axon_pos_[static_cast<size_t>(i) * (n_ - 1) + col];
}

void Network::set_soma_position(int i, double pos) {
  if (i < 0 || i >= n_) throw std::invalid_argument("soma index out of range");
  if (!(pos >= 0) || !(pos <= params_.track_length))
    throw std::invalid_argument("position outside the track");
  soma_pos_[i] = pos;
}

void Network::set_axon_row_position(int i, double pos) {
  if (i < 0 || i >= n_) throw std::invalid_argument("axon index out of range");
  if (!(pos >= 0) || !(pos <= params_.track_length))
    throw std::invalid_argument("position outside the track");
  for (int c = 0; c < n_ - 1; ++c)
    axon_pos_[static_cast<size_t>(i) * (n_ - 1) + c] = pos;
}

bool Network::all_pinned_at_targets(double tol) const {
  for (int i = 0; i < n_; ++i)
    if (std::fabs(soma_pos_[i] - target_pos_[i]) > tol) return false;
  return true;
}

bool Network::all_pinned_anywhere(double tol) const {
  const double high = params_.track_length;
  for (double p : soma_pos_)
    if (p > tol && p < high - tol) return false;
  return true;
}

void Network::step(double dt, bool chargeup, bool zero_weights, bool validate) {
  const int n = n_;
  const int m = n - 1;
  const double len = params_.track_length;
  const double g_m = 1.0 / params_.r_metal;
  const double axon_leak = params_.axon_leak;
  const double soma_leak = params_.soma_leak;

  // Soma readout feeds the per-branch axon drive divider.
  double p_vdw_step = 0;
  for (int i = 0; i < n; ++i) {
    const double g_soma = mtj_conductance(soma_pos_[i], params_);
    const double i_br =
        axon_drive_current(v_dw_, 1.0 / g_soma, params_.r_metal, branch_count_);
    drive_i_[i] = i_br;
    p_vdw_step += v_dw_ * static_cast<double>(branch_count_) * i_br;
  }

  // Axon walls move under their drive current; replicas of one neuron share
  // the same drive so the fast path reads one conductance per row.
  for (int i = 0; i < n; ++i) {
    const double v_ax = dw_velocity(drive_i_[i], k_, axon_leak);
    double* row = &axon_pos_[static_cast<size_t>(i) * m];
    for (int c = 0; c < m; ++c) row[c] = step_position(row[c], v_ax, dt, len);
    if (validate) {
      double* grow = &g_axon_[static_cast<size_t>(i) * m];
      for (int c = 0; c < m; ++c) grow[c] = mtj_conductance(row[c], params_);
    }
    g_row_[i] = mtj_conductance(row[0], params_);
  }
  double s_all = 0;
  for (int i = 0; i < n; ++i) s_all += g_row_[i];

  // Dendrite solves and soma motion. Dendrites couple only through the axon
  // states frozen above, so the per-neuron order is immaterial.
  double step_weights = 0, step_vc = 0;
  double finite_guard = 0;
  for (int i = 0; i < n; ++i) {
    double numer, wwg, s_branches;
    if (validate) {
      KahanSum num_k, wwg_k, s_k;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const int col = (i < j) ? i : i - 1;
        const double g = g_axon_[static_cast<size_t>(j) * m + col];
        const double w = zero_weights ? 0.0 : w_in_[static_cast<size_t>(i) * n + j];
        num_k.add(w * g);
        wwg_k.add(w * w * g);
        s_k.add(g);
      }
      numer = num_k.value();
      wwg = wwg_k.value();
      s_branches = s_k.value();
    } else if (zero_weights) {
      numer = 0;
      wwg = 0;
      s_branches = s_all - g_row_[i];
    } else {
      const double* wi = &w_in_[static_cast<size_t>(i) * n];
      const double* w2i = &w2_in_[static_cast<size_t>(i) * n];
      double acc_w = 0, acc_ww = 0;
      for (int j = 0; j < n; ++j) {
        acc_w += wi[j] * g_row_[j];  // diagonal term is zero by construction
        acc_ww += w2i[j] * g_row_[j];
      }
      numer = acc_w;
      wwg = acc_ww;
      s_branches = s_all - g_row_[i];
    }
    const double denom = s_branches + g_m;
    const double v_node = chargeup ? clamp_v_[i] : refined_div(numer, denom);
    finite_guard += std::fabs(v_node);
    const double i_track = v_node * g_m;

    // Source-side power split. p_w is what the synapse sources deliver; the
    // clamp covers the rest. Net delivery equals dissipation identically, so
    // booking any negative leg against the other keeps both running energy
    // classes non-decreasing without breaking conservation.
    const double p_w = wwg - v_node * numer;
    double total, w_acc;
    if (chargeup) {
      const double p_clamp = v_node * (v_node * denom - numer);
      total = p_w + p_clamp;
      if (total < 0) total = 0;
      w_acc = std::clamp(p_w, 0.0, total);
    } else {
      total = p_w > 0 ? p_w : 0.0;
      w_acc = total;
    }
    step_weights += w_acc;
    step_vc += total - w_acc;

    if (validate) {
      KahanSum i_sum, abs_sum, p_del, p_dis;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const int col = (i < j) ? i : i - 1;
        const double g = g_axon_[static_cast<size_t>(j) * m + col];
        const double w = zero_weights ? 0.0 : w_in_[static_cast<size_t>(i) * n + j];
        const double dv = w - v_node;
        const double i_j = dv * g;
        i_sum.add(i_j);
        abs_sum.add(std::fabs(i_j));
        p_del.add(w * i_j);
        p_dis.add(dv * i_j);
      }
      double delivered = p_del.value();
      double scale = abs_sum.value() + std::fabs(i_track);
      if (chargeup) {
        const double i_clamp = i_track - i_sum.value();
        delivered += v_node * i_clamp;
        scale += std::fabs(i_clamp);
      } else {
        const double kcl = std::fabs(i_sum.value() - i_track);
        if (scale > 0)
          audit_.max_kcl_rel = std::max(audit_.max_kcl_rel, kcl / scale);
      }
      const double dissipated = p_dis.value() + v_node * i_track;
      const double p_res = std::fabs(delivered - dissipated);
      const double p_scale = std::max(std::fabs(dissipated), 1e-30);
      audit_.max_power_rel = std::max(audit_.max_power_rel, p_res / p_scale);
    }

    const double v_soma = dw_velocity(i_track, k_, soma_leak);
    soma_pos_[i] = step_position(soma_pos_[i], v_soma, dt, len);
  }

  if (!std::isfinite(finite_guard))
    throw NumericFault("non-finite dendrite node voltage during integration");

  energy_.weights += step_weights * dt;
  energy_.vc += step_vc * dt;
  energy_.vdw += p_vdw_step * dt;
  ++steps_total_;
}

void Network::charge_up(const BitVec& pattern, double v_c, const SimOptions& opt) {
  check_options(opt);
  if (static_cast<int>(pattern.size()) != n_)
    throw std::invalid_argument("pattern length does not match network size");
  if (!(v_c >= 0) || !std::isfinite(v_c))
    throw std::invalid_argument("v_c must be a non-negative voltage");

  for (int i = 0; i < n_; ++i) {
    const bool on = pattern[i] != 0;
    clamp_v_[i] = on ? v_c : -v_c;
    target_pos_[i] = on ? params_.track_length : 0.0;
  }

  phase_ = Phase::charge_up;
  const EnergyByClass before = energy_;
  const double t0 = t_;
  const long long cap = steps_for(opt.chargeup_t_cap, opt.dt);

  long long s = 0;
  bool done = all_pinned_at_targets(opt.pin_tolerance);
  while (!done && s < cap) {
    step(opt.dt, /*chargeup=*/true, opt.zero_weights_during_chargeup,
         opt.validate_each_step);
    ++s;
    t_ = t0 + static_cast<double>(s) * opt.dt;
    done = all_pinned_at_targets(opt.pin_tolerance);
  }

  chargeup_incomplete_ = !done;
  t_chargeup_ += static_cast<double>(s) * opt.dt;
  chargeup_energy_.weights += energy_.weights - before.weights;
  chargeup_energy_.vdw += energy_.vdw - before.vdw;
  chargeup_energy_.vc += energy_.vc - before.vc;
  phase_ = Phase::free_run;
}

TrialReport Network::release_and_converge(const SimOptions& opt) {
  check_options(opt);
  if (phase_ != Phase::free_run)
    throw std::logic_error("release requires the free-run phase");

  TrialReport rep;
  rep.validated = opt.validate_each_step;

  const double t0 = t_;
  const long long max_steps = steps_for(opt.t_max, opt.dt);
  const long long hold_steps = std::max<long long>(1, steps_for(opt.hold_window, opt.dt));

  long long pinned_since_step = -1;
  EnergyByClass pinned_energy;
  bool converged = false;
  double t_converge = 0;

  auto sample_trace = [&](long long step_idx) {
    rep.trace_times.push_back(static_cast<double>(step_idx) * opt.dt);
    rep.trace_soma_positions.push_back(soma_pos_);
  };

  long long s = 0;
  if (opt.trace_every_steps > 0) sample_trace(0);
  while (s < max_steps) {
    step(opt.dt, /*chargeup=*/false, /*zero_weights=*/false,
         opt.validate_each_step);
    ++s;
    t_ = t0 + static_cast<double>(s) * opt.dt;
    if (opt.trace_every_steps > 0 && s % opt.trace_every_steps == 0)
      sample_trace(s);

    if (all_pinned_anywhere(opt.pin_tolerance)) {
      if (pinned_since_step < 0) {
        pinned_since_step = s;
        pinned_energy = energy_;
      } else if (s - pinned_since_step >= hold_steps) {
        converged = true;
        t_converge = static_cast<double>(pinned_since_step) * opt.dt;
        break;
      }
    } else {
      pinned_since_step = -1;
    }
  }
  if (opt.trace_every_steps > 0 &&
      (rep.trace_times.empty() ||
       rep.trace_times.back() != static_cast<double>(s) * opt.dt))
    sample_trace(s);

  rep.converged = converged;
  rep.chargeup_incomplete = chargeup_incomplete_;
  rep.t_chargeup = t_chargeup_;
  rep.t_converge = converged ? t_converge : static_cast<double>(s) * opt.dt;
  rep.final_bits = read_states();
  rep.energy = converged ? pinned_energy : energy_;
  rep.chargeup_energy = chargeup_energy_;
  rep.energy_total = rep.energy.total();
  const double elapsed = rep.t_chargeup + rep.t_converge;
  rep.avg_power = elapsed > 0 ? rep.energy_total / elapsed : 0.0;
  rep.steps = steps_total_;
  rep.max_kcl_residual_rel = audit_.max_kcl_rel;
  rep.max_power_residual_rel = audit_.max_power_rel;
  return rep;
}

BitVec Network::read_states() const {
  BitVec bits(n_);
  const double mid = params_.window_center();
  for (int i = 0; i < n_; ++i) bits[i] = soma_pos_[i] > mid ? 1 : 0;
  return bits;
}

}  // namespace spinhop
