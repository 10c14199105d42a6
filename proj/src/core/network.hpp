#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "circuit.hpp"
#include "device.hpp"
#include "graph.hpp"

namespace spinhop {

using BitVec = std::vector<uint8_t>;

// Synaptic voltage matrix with a hard-zero diagonal. at(i, j) is the source
// voltage neuron i presents to neuron j's dendrite.
class WeightMatrix {
 public:
  explicit WeightMatrix(int n);

  int size() const { return n_; }
  double at(int i, int j) const { return w_[static_cast<size_t>(i) * n_ + j]; }
  void set(int i, int j, double v);
  double max_abs() const;

 private:
  int n_;
  std::vector<double> w_;
};

// Bipolar Hebbian outer-product rule over {0,1} patterns (nonzero byte = 1).
WeightMatrix train_hebbian(std::span<const BitVec> patterns, double w_mag,
                           bool normalize);

// Max-cut embedding: +w_mag between non-adjacent nodes, -penalty*w_mag across
// edges so separating an edge's endpoints pays slightly more than agreement.
WeightMatrix weights_for_maxcut(const Graph& g, double w_mag,
                                double penalty = 1.05);

enum class Phase { free_run, charge_up };

struct EnergyByClass {
  double weights = 0;  // J funded by the synapse sources
  double vdw = 0;      // J from the axon drive rail
  double vc = 0;       // J from the soma write clamps
  double total() const { return weights + vdw + vc; }
};

struct SimOptions {
  double dt = 1e-12;                // s
  double t_max = 2e-6;              // s, free-run budget
  double hold_window = 5e-9;        // s of continuous pinning = converged
  double pin_tolerance = 1e-10;     // m from a track end
  double chargeup_t_cap = 2e-8;     // s before charge-up is flagged stuck
  bool validate_each_step = false;  // per-branch audit of KCL and power
  bool zero_weights_during_chargeup = false;
  int trace_every_steps = 0;        // 0 disables soma position traces
};

struct TrialReport {
  bool converged = false;
  bool chargeup_incomplete = false;
  double t_chargeup = 0;  // s spent with clamps applied
  double t_converge = 0;  // s from release to the start of the hold window
  BitVec final_bits;
  EnergyByClass energy;           // accrued through t_converge (or t_max)
  EnergyByClass chargeup_energy;  // subset spent while clamps were applied
  double energy_total = 0;        // J
  double avg_power = 0;           // W over charge-up + settling
  long long steps = 0;
  bool validated = false;
  double max_kcl_residual_rel = 0;    // worst node-current imbalance / scale
  double max_power_residual_rel = 0;  // worst |delivered-dissipated| / scale
  std::vector<double> trace_times;    // s from release
  std::vector<std::vector<double>> trace_soma_positions;
};

// One all-to-all network: N somata, each replicated into N-1 axon devices that
// feed the other neurons' dendrite stars. Integration follows a fixed per-step
// order: soma readout, axon drive, axon motion, dendrite solve, soma motion,
// energy accrual. Dendrites couple only through frozen axon states, so the
// per-neuron solve order cannot change the result.
class Network {
 public:
  // literal_branch_count swaps the physical n-1 dendrite fan-in for n+1 in
  // the axon drive divider, matching the source-text calibration variant.
  Network(const DeviceParams& params, WeightMatrix weights, double v_dw,
          bool literal_branch_count = false);

  // Every domain wall parked at the low-conductance track end.
  static Network init_all_antiparallel(const DeviceParams& params,
                                       WeightMatrix weights, double v_dw,
                                       bool literal_branch_count = false);

  int size() const { return n_; }
  Phase phase() const { return phase_; }
  double time() const { return t_; }
  double v_dw() const { return v_dw_; }
  int branch_count() const { return branch_count_; }
  const DeviceParams& params() const { return params_; }
  const WeightMatrix& weights() const { return weights_; }
  double soma_position(int i) const { return soma_pos_[i]; }
  // Position of the axon replica of neuron i that feeds neuron j (i != j).
  double axon_position(int i, int j) const;
  void set_soma_position(int i, double pos);
  void set_axon_row_position(int i, double pos);  // all replicas of neuron i
  const EnergyByClass& energy() const { return energy_; }

  // Drives every soma toward the track end encoding pattern[i] with +/-v_c
  // node clamps; axons keep integrating. Returns once all somata are pinned
  // at their targets, or after chargeup_t_cap (then chargeup_incomplete is
  // latched into later reports).
  void charge_up(const BitVec& pattern, double v_c, const SimOptions& opt);

  // Free-run until every soma stays within pin_tolerance of a track end for a
  // full hold_window, or t_max elapses. Convergence time and energy are taken
  // at the start of the hold window; telemetry includes the charge-up phase.
  TrialReport release_and_converge(const SimOptions& opt);

  // Bit i = 1 iff soma wall i sits past the MTJ window center.
  BitVec read_states() const;

 private:
  struct StepAudit {
    double max_kcl_rel = 0;
    double max_power_rel = 0;
  };

  void step(double dt, bool chargeup, bool zero_weights, bool validate);
  bool all_pinned_at_targets(double tol) const;
  bool all_pinned_anywhere(double tol) const;

  int n_;
  DeviceParams params_;
  WeightMatrix weights_;
  double v_dw_;
  double k_;          // wall mobility
  int branch_count_;  // fan-in seen by each axon drive divider

  std::vector<double> soma_pos_;
  std::vector<double> axon_pos_;  // n*(n-1), row i = replicas of neuron i
  std::vector<double> w_in_;      // w_in_[i*n+j] = weight from j into i
  std::vector<double> w2_in_;     // squared copy for power closed forms

  Phase phase_ = Phase::free_run;
  double t_ = 0;
  EnergyByClass energy_;
  EnergyByClass chargeup_energy_;
  double t_chargeup_ = 0;
  bool chargeup_incomplete_ = false;
  long long steps_total_ = 0;
  StepAudit audit_;

  std::vector<double> clamp_v_;    // per-soma clamp voltage during charge-up
  std::vector<double> target_pos_; // per-soma charge-up target position
  std::vector<double> g_row_;      // per-neuron axon conductance (fast path)
  std::vector<double> g_axon_;     // per-replica conductance (validate path)
  std::vector<double> drive_i_;    // per-branch axon drive current
};

}  // namespace spinhop
