#include "circuit.hpp"

#include <cmath>
#include <stdexcept>

#include "kahan.hpp"

namespace spinhop {

DendriteSolution dendrite_solve(std::span<const SynapseBranch> branches, double r_metal,
                                std::optional<double> clamp) {
  if (branches.empty() && !clamp)
    throw std::invalid_argument("dendrite_solve: no branches and no clamp");
  if (!(r_metal > 0.0)) throw std::invalid_argument("dendrite_solve: r_metal must be > 0");

  DendriteSolution out;
  const double g_metal = 1.0 / r_metal;

  if (clamp) {
    out.clamped = true;
    out.node_voltage = *clamp;
  } else {
    KahanSum num, den;
    for (const auto& b : branches) {
      if (!(b.branch_resistance > 0.0))
        throw std::invalid_argument("dendrite_solve: branch resistance must be > 0");
      const double g = 1.0 / b.branch_resistance;
      num.add(b.source_voltage * g);
      den.add(g);
    }
    den.add(g_metal);
    out.node_voltage = num.value() / den.value();
  }

  out.track_current = out.node_voltage * g_metal;

  out.branch_currents.reserve(branches.size());
  KahanSum into_node, power, dissipated, scale;
  for (const auto& b : branches) {
    const double g = 1.0 / b.branch_resistance;
    const double i = (b.source_voltage - out.node_voltage) * g;
    out.branch_currents.push_back(i);
    into_node.add(i);
    power.add(b.source_voltage * i);
    dissipated.add(i * i * b.branch_resistance);
    scale.add(std::fabs(i));
  }
  if (out.clamped) {
    out.clamp_current = out.track_current - into_node.value();
    power.add(out.node_voltage * out.clamp_current);
  }
  dissipated.add(out.track_current * out.track_current * r_metal);

  out.kcl_residual =
      std::fabs(into_node.value() + out.clamp_current - out.track_current);
  out.current_scale =
      scale.value() + std::fabs(out.clamp_current) + std::fabs(out.track_current);
  out.source_power = power.value();
  out.dissipated_power = dissipated.value();
  return out;
}

double axon_drive_current(double v_dw, double soma_mtj_resistance, double r_metal,
                          int branch_count) {
  if (branch_count < 1) throw std::invalid_argument("axon_drive_current: branch_count < 1");
  if (!(soma_mtj_resistance > 0.0) || !(r_metal > 0.0))
    throw std::invalid_argument("axon_drive_current: resistances must be > 0");
  const double b = static_cast<double>(branch_count);
  return v_dw / (b * (soma_mtj_resistance + r_metal / b));
}

double calibrate_vdw(const DeviceParams& p, int n_neurons, CalibrationMode mode,
                     double explicit_v) {
  if (mode == CalibrationMode::explicit_value) {
    if (!(explicit_v > 0.0))
      throw std::invalid_argument("calibrate_vdw: explicit value must be > 0");
    return explicit_v;
  }
  if (n_neurons < 2) throw std::invalid_argument("calibrate_vdw: n_neurons must be >= 2");

  const double k = mobility_k(p);
  const double leak_mag = std::fabs(p.axon_leak);
  const double r_mid = 0.5 * (p.r_antiparallel + p.r_parallel);

  switch (mode) {
    case CalibrationMode::balanced: {
      const double b = static_cast<double>(n_neurons - 1);
      return (leak_mag / k) * b * (r_mid + p.r_metal / b);
    }
    case CalibrationMode::eq6_literal: {
      const double b = static_cast<double>(n_neurons + 1);
      return (leak_mag / k) * b * (r_mid + p.r_metal / b);
    }
    case CalibrationMode::eq7_literal:
      return (leak_mag / k) * static_cast<double>(n_neurons - 1) * r_mid;
    case CalibrationMode::eq8_literal: {
      const double tmr = (p.r_antiparallel - p.r_parallel) / p.r_parallel;
      return (leak_mag * p.r_parallel / k) * static_cast<double>(n_neurons - 1) *
             (1.0 + 0.5 * tmr);
    }
    default:
      throw std::invalid_argument("calibrate_vdw: bad mode");
  }
}

double instantaneous_power(std::span<const double> source_voltages,
                           std::span<const double> source_currents) {
  if (source_voltages.size() != source_currents.size())
    throw std::invalid_argument("instantaneous_power: length mismatch");
  KahanSum p;
  for (size_t i = 0; i < source_voltages.size(); ++i)
    p.add(source_voltages[i] * source_currents[i]);
  return p.value();
}

}  // namespace spinhop
