#include "device.hpp"

#include <stdexcept>
#include <string>

namespace spinhop {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("device params: ") + what);
}

}  // namespace

void DeviceParams::validate() const {
  require(cross_section > 0.0, "cross_section must be > 0");
  require(msat > 0.0, "msat must be > 0");
  require(electron_charge > 0.0, "electron_charge must be > 0");
  require(track_length > 0.0, "track_length must be > 0");
  require(mtj_width > 0.0, "mtj_width must be > 0");
  require(r_parallel > 0.0, "r_parallel must be > 0");
  require(r_antiparallel > 0.0, "r_antiparallel must be > 0");
  require(r_metal > 0.0, "r_metal must be > 0");
  require(r_antiparallel > r_parallel, "r_antiparallel must exceed r_parallel");
  // MTJ window must sit strictly inside the track so both binary states exist.
  require(window_low() > 0.0 && window_high() < track_length,
          "mtj window must lie strictly inside (0, track_length)");
}

double mobility_k(const DeviceParams& p) {
  p.validate();
  return p.lande_g * p.polarization * p.bohr_magneton /
         (2.0 * p.cross_section * p.msat * p.electron_charge);
}

DwMtjState make_soma(const DeviceParams& p, double position) {
  return DwMtjState{std::clamp(position, 0.0, p.track_length), DeviceRole::soma, p.soma_leak};
}

DwMtjState make_axon(const DeviceParams& p, double position) {
  return DwMtjState{std::clamp(position, 0.0, p.track_length), DeviceRole::axon, p.axon_leak};
}

DwMtjState step_position(const DwMtjState& s, double velocity, double dt, const DeviceParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_position: dt must be > 0");
  DwMtjState out = s;
  out.position = step_position(s.position, velocity, dt, p.track_length);
  return out;
}

}  // namespace spinhop
