#include <cmath>

#include "device.hpp"
#include "doctest.h"
#include "rng.hpp"
#include "support/reference.hpp"

using namespace spinhop;

TEST_CASE("wall mobility for the default device") {
  DeviceParams p;
  const double k = mobility_k(p);
  // g*P*mu_B / (2*A*Msat*e) with the table defaults.
  const double by_hand = (2.1 * 0.7 * 9.274e-24) / (2.0 * 50e-18 * 8e5 * 1.602e-19);
  CHECK(k == doctest::Approx(by_hand).epsilon(1e-12));
  CHECK(k == doctest::Approx(1.0637e6).epsilon(1e-4));
  CHECK(k == doctest::Approx(static_cast<double>(refmodel::ref_mobility(p))).epsilon(1e-15));
}

TEST_CASE("velocity is linear in current with the leak as offset") {
  DeviceParams p;
  const double k = mobility_k(p);
  CHECK(dw_velocity(0.0, k, -5.0) == -5.0);
  CHECK(dw_velocity(0.0, k, 0.2) == 0.2);
  // 2.35e-6 A at k~1.0637e6 m/(s*A) gives ~2.5 m/s before leak.
  CHECK(dw_velocity(2.35e-6, k, 0.0) == doctest::Approx(2.4997e0).epsilon(1e-3));
  CHECK(dw_velocity(1e-6, k, -1.0) == doctest::Approx(k * 1e-6 - 1.0));
}

TEST_CASE("positions stay on the track under random velocity sequences") {
  DeviceParams p;
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    double pos = rng.uniform01() * p.track_length;
    for (int s = 0; s < 500; ++s) {
      const double v = (rng.uniform01() - 0.5) * 400.0;  // up to +-200 m/s
      pos = step_position(pos, v, 1e-12, p.track_length);
      REQUIRE(pos >= 0.0);
      REQUIRE(pos <= p.track_length);
    }
  }
}

TEST_CASE("pinned walls stay pinned without inward drive") {
  DeviceParams p;
  CHECK(step_position(0.0, -50.0, 1e-12, p.track_length) == 0.0);
  CHECK(step_position(p.track_length, 50.0, 1e-12, p.track_length) ==
        p.track_length);
}

TEST_CASE("conductance at the rails equals the pure MTJ states") {
  DeviceParams p;
  CHECK(mtj_conductance(0.0, p) == doctest::Approx(1.0 / 2000.0).epsilon(1e-15));
  CHECK(mtj_conductance(p.track_length, p) ==
        doctest::Approx(1.0 / 500.0).epsilon(1e-15));
  // Below/above the window the value is exactly the rail value.
  CHECK(mtj_conductance(p.window_low() - 1e-9, p) == 1.0 / 2000.0);
  CHECK(mtj_conductance(p.window_high() + 1e-9, p) == 1.0 / 500.0);
  // Window midpoint mixes both plates equally.
  CHECK(mtj_conductance(p.window_center(), p) ==
        doctest::Approx(0.5 / 500.0 + 0.5 / 2000.0).epsilon(1e-15));
}

TEST_CASE("conductance rises monotonically with wall position") {
  DeviceParams p;
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double pos = p.track_length * static_cast<double>(i) / 1000.0;
    const double g = mtj_conductance(pos, p);
    CHECK(g >= prev);
    prev = g;
  }
}

TEST_CASE("default window sits at 40-60 nm") {
  DeviceParams p;
  CHECK(p.window_low() == doctest::Approx(40e-9));
  CHECK(p.window_high() == doctest::Approx(60e-9));
}

TEST_CASE("binary state bands around the window") {
  DeviceParams p;
  CHECK(binary_state(0.0, p) == BinaryState::off);
  CHECK(binary_state(39e-9, p) == BinaryState::off);
  CHECK(binary_state(50e-9, p) == BinaryState::transit);
  CHECK(binary_state(61e-9, p) == BinaryState::on);
  CHECK(binary_state(p.track_length, p) == BinaryState::on);
}

TEST_CASE("soma and axon factories carry their leaks") {
  DeviceParams p;
  const DwMtjState s = make_soma(p, 10e-9);
  const DwMtjState a = make_axon(p, 90e-9);
  CHECK(s.leak == p.soma_leak);
  CHECK(a.leak == p.axon_leak);
  CHECK(s.role == DeviceRole::soma);
  CHECK(a.role == DeviceRole::axon);
}

TEST_CASE("parameter validation rejects unphysical values") {
  DeviceParams p;
  p.track_length = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = DeviceParams{};
  p.r_parallel = 3000.0;  // above r_antiparallel
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = DeviceParams{};
  p.mtj_width = 300e-9;  // window wider than the track
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_NOTHROW(DeviceParams{}.validate());
}
