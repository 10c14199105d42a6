#pragma once

#include <algorithm>
#include <cmath>

namespace spinhop {

// Physical constants and geometry shared by every DW-MTJ device in a network.
// All values SI. Defaults are the device sizing used for the experiments
// (cross section 50 nm^2, 100 nm track, 20 nm MTJ window centered at 50%).
struct DeviceParams {
  double lande_g = 2.1;
  double polarization = 0.7;
  double bohr_magneton = 9.274e-24;    // J/T
  double cross_section = 50e-18;       // m^2, normal to track current
  double track_length = 100e-9;        // m
  double mtj_width = 20e-9;            // m
  double mtj_placement = 0.5;          // window center, fraction of track_length
  double electron_charge = 1.602e-19;  // C
  double msat = 8e5;                   // A/m
  double soma_leak = 0.2;              // m/s, toward the high (parallel) end
  double axon_leak = -5.0;             // m/s, toward the low (antiparallel) end
  double r_parallel = 500.0;           // ohm
  double r_antiparallel = 2000.0;      // ohm
  double r_metal = 2000.0;             // ohm (heavy-metal track layer)

  double window_low() const { return mtj_placement * track_length - 0.5 * mtj_width; }
  double window_high() const { return mtj_placement * track_length + 0.5 * mtj_width; }
  double window_center() const { return mtj_placement * track_length; }

  // Throws std::invalid_argument on unphysical values.
  void validate() const;
};

enum class DeviceRole { soma, axon };

// off = wall strictly below the MTJ window, on = strictly above, transit = under it.
enum class BinaryState { off, transit, on };

// One domain-wall device. The wall coordinate lives in [0, track_length] on an
// abstract per-device axis: 0 is the antiparallel (off/low) end and
// track_length the parallel (on/high) end. Positive velocity moves the wall
// toward the high end regardless of the device's physical orientation.
struct DwMtjState {
  double position = 0.0;  // m
  DeviceRole role = DeviceRole::soma;
  double leak = 0.0;  // m/s, signed along the same axis
};

// Wall mobility k in m/(s*A): velocity per unit track current.
double mobility_k(const DeviceParams& p);

// v = I*k + L. Linear in the drive current; the leak acts with zero drive.
inline double dw_velocity(double current, double k, double leak) {
  return current * k + leak;
}

// Explicit Euler with lossless pinning at the track edges.
inline double step_position(double position, double velocity, double dt, double track_length) {
  return std::clamp(position + velocity * dt, 0.0, track_length);
}

// Area-weighted conductance of the MTJ window split by the wall: the part of
// the window below the wall reads parallel, the rest antiparallel. Exactly
// 1/r_antiparallel and 1/r_parallel once the wall clears the window.
inline double mtj_conductance(double position, const DeviceParams& p) {
  const double f =
      std::clamp((position - p.window_low()) / p.mtj_width, 0.0, 1.0);
  return f / p.r_parallel + (1.0 - f) / p.r_antiparallel;
}

inline BinaryState binary_state(double position, const DeviceParams& p) {
  if (position > p.window_high()) return BinaryState::on;
  if (position < p.window_low()) return BinaryState::off;
  return BinaryState::transit;
}

// State-level wrappers.
DwMtjState make_soma(const DeviceParams& p, double position);
DwMtjState make_axon(const DeviceParams& p, double position);
DwMtjState step_position(const DwMtjState& s, double velocity, double dt, const DeviceParams& p);
inline double mtj_conductance(const DwMtjState& s, const DeviceParams& p) {
  return mtj_conductance(s.position, p);
}
inline BinaryState binary_state(const DwMtjState& s, const DeviceParams& p) {
  return binary_state(s.position, p);
}

}  // namespace spinhop
