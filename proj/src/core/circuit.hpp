#pragma once

#include <optional>
#include <span>
#include <vector>

#include "device.hpp"

namespace spinhop {

// One pre-synaptic input to a dendrite: the trained weight voltage in series
// with that axon's MTJ resistance (position-dependent, so updated every step).
struct SynapseBranch {
  double source_voltage = 0.0;    // V, signed
  double branch_resistance = 0.0; // ohm
};

// Solution of one dendrite star node. Currents are signed: branch and clamp
// currents flow into the node, track_current flows out through r_metal to
// ground. Positive track current drives the soma toward its high end.
struct DendriteSolution {
  double node_voltage = 0.0;
  double track_current = 0.0;
  std::vector<double> branch_currents;
  double clamp_current = 0.0;  // 0 when unclamped
  bool clamped = false;

  double kcl_residual = 0.0;       // |sum(branch) + clamp - track|, A
  double current_scale = 0.0;      // sum of |current| at the node, A
  double source_power = 0.0;       // net power delivered by branch+clamp sources, W
  double dissipated_power = 0.0;   // sum of I^2 R over branch resistors and r_metal, W
};

// Star solve: branch sources through their resistances into one node, returned
// to ground through the soma track r_metal. With a clamp the node is held at
// the clamp voltage (ideal source) and clamp_current balances KCL.
// Throws std::invalid_argument if there is no branch and no clamp.
DendriteSolution dendrite_solve(std::span<const SynapseBranch> branches, double r_metal,
                                std::optional<double> clamp = std::nullopt);

// Per-branch drive current of the soma-to-axon divider: v_dw through the soma
// MTJ into branch_count parallel axon tracks of r_metal each. The split is
// exact because the branches are identical.
double axon_drive_current(double v_dw, double soma_mtj_resistance, double r_metal,
                          int branch_count);

enum class CalibrationMode {
  balanced,     // zero axon velocity at the midpoint MTJ resistance, physical branch count
  eq6_literal,  // same balance but with n+1 branches
  eq7_literal,  // (|L|/k) * (n-1) * (R_AP+R_P)/2, no track term
  eq8_literal,  // (|L| R_P / k) * (n-1) * (1 + TMR/2); algebraically equal to eq7
  explicit_value,
};

// Soma-to-axon supply voltage for an n-neuron network. Result is positive; the
// axon leak's sign carries the direction convention. explicit_value returns
// explicit_v (must be > 0).
double calibrate_vdw(const DeviceParams& p, int n_neurons, CalibrationMode mode,
                     double explicit_v = 0.0);

// Sum of V*I over sources, passive sign convention (positive = delivered).
double instantaneous_power(std::span<const double> source_voltages,
                           std::span<const double> source_currents);

}  // namespace spinhop
