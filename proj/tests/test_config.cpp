#include <cstdlib>
#include <string>

#include "config.hpp"
#include "doctest.h"
#include "errors.hpp"

using namespace spinhop;
using nlohmann::json;

namespace {

struct EnvGuard {
  std::string name;
  EnvGuard(const char* n, const char* value) : name(n) {
    setenv(n, value, 1);
  }
  ~EnvGuard() { unsetenv(name.c_str()); }
};

bool mentions(const std::exception& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("default configuration carries the reference device values") {
  const RunConfig cfg;
  const RunSettings s = cfg.to_settings();
  CHECK(s.device.lande_g == 2.1);
  CHECK(s.device.polarization == 0.7);
  CHECK(s.device.cross_section == doctest::Approx(50e-18));
  CHECK(s.device.track_length == doctest::Approx(100e-9));
  CHECK(s.device.mtj_width == doctest::Approx(20e-9));
  CHECK(s.device.mtj_placement == 0.5);
  CHECK(s.device.msat == 8e5);
  CHECK(s.device.soma_leak == 0.2);
  CHECK(s.device.axon_leak == -5.0);
  CHECK(s.device.r_parallel == 500.0);
  CHECK(s.device.r_antiparallel == 2000.0);
  CHECK(s.device.r_metal == 2000.0);
  CHECK(s.sim.dt == doctest::Approx(1e-12));
  CHECK(s.sim.t_max == doctest::Approx(2000e-9));
  CHECK(s.sim.hold_window == doctest::Approx(5e-9));
  CHECK(s.sim.pin_tolerance == doctest::Approx(0.1e-9));
  CHECK(s.sim.chargeup_t_cap == doctest::Approx(20e-9));
  CHECK(s.w_mag == 0.1);
  CHECK(s.v_c == 0.25);
  CHECK(s.calibration == CalibrationMode::balanced);
  CHECK(s.maxcut_penalty == 1.05);
  CHECK(s.threads == 1);
  CHECK(cfg.seed == 1);
}

TEST_CASE("config json round-trips bit-for-bit") {
  RunConfig cfg;
  cfg.device.polarization = 0.6789012345678901;
  cfg.sim.dt_ps = 0.3333333333333333;
  cfg.network.calibration = "eq7";
  cfg.seed = 0xDEADBEEFCAFEBABEull;
  cfg.threads = 7;
  const json a = config_to_json(cfg);
  const RunConfig back = parse_config(a.dump());
  const json b = config_to_json(back);
  CHECK(a.dump() == b.dump());
  CHECK(back.device.polarization == cfg.device.polarization);
  CHECK(back.sim.dt_ps == cfg.sim.dt_ps);
  CHECK(back.seed == cfg.seed);
}

TEST_CASE("missing keys keep defaults; partial sections merge") {
  const RunConfig cfg = parse_config(R"({"sim": {"dt_ps": 2.0}})");
  CHECK(cfg.sim.dt_ps == 2.0);
  CHECK(cfg.sim.t_max_ns == 2000.0);
  CHECK(cfg.device.lande_g == 2.1);
}

TEST_CASE("unknown and mistyped keys are reported by qualified name") {
  try {
    parse_config(R"({"sim": {"dtps": 2.0}})");
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "sim.dtps"));
  }
  try {
    parse_config(R"({"device": {"lande_g": "two"}})");
    FAIL("mistyped value accepted");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "device.lande_g"));
  }
  try {
    parse_config(R"({"simulation": {}})");
    FAIL("unknown section accepted");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "simulation"));
  }
  CHECK_THROWS_AS(parse_config(R"({"sim": 3})"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("calibration mode names parse and print consistently") {
  CHECK(parse_calibration_mode("balanced") == CalibrationMode::balanced);
  CHECK(parse_calibration_mode("eq6") == CalibrationMode::eq6_literal);
  CHECK(parse_calibration_mode("eq7") == CalibrationMode::eq7_literal);
  CHECK(parse_calibration_mode("eq8") == CalibrationMode::eq8_literal);
  CHECK(parse_calibration_mode("explicit") == CalibrationMode::explicit_value);
  for (const char* name : {"balanced", "eq6", "eq7", "eq8", "explicit"})
    CHECK(calibration_mode_name(parse_calibration_mode(name)) == name);
  CHECK_THROWS_AS(parse_calibration_mode("EQ7"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"network": {"calibration": "magic"}})"),
                  ConfigError);
}

TEST_CASE("settings conversion rejects unusable values") {
  RunConfig cfg;
  cfg.sim.dt_ps = 0.0;
  CHECK_THROWS_AS(cfg.to_settings(), ConfigError);
  cfg = RunConfig{};
  cfg.sim.t_max_ns = 1e-7;  // shorter than one step
  CHECK_THROWS_AS(cfg.to_settings(), ConfigError);
  cfg = RunConfig{};
  cfg.network.w_mag_v = 0.0;
  CHECK_THROWS_AS(cfg.to_settings(), ConfigError);
  cfg = RunConfig{};
  cfg.device.r_parallel_ohm = 5000.0;  // above the antiparallel rail
  CHECK_THROWS_AS(cfg.to_settings(), ConfigError);
  cfg = RunConfig{};
  cfg.threads = -1;
  CHECK_THROWS_AS(cfg.to_settings(), ConfigError);
  cfg = RunConfig{};
  cfg.threads = 0;
  CHECK(cfg.to_settings().threads >= 1);
}

TEST_CASE("environment overrides apply and validate") {
  {
    EnvGuard seed("SPINHOP_SEED", "99");
    EnvGuard dt("SPINHOP_DT_PS", "0.5");
    EnvGuard val("SPINHOP_VALIDATE", "true");
    EnvGuard tr("SPINHOP_TRACE_EVERY_STEPS", "250");
    RunConfig cfg;
    apply_env_overrides(cfg);
    CHECK(cfg.seed == 99);
    CHECK(cfg.sim.dt_ps == 0.5);
    CHECK(cfg.sim.validate_each_step);
    CHECK(cfg.sim.trace_every_steps == 250);
  }
  {
    EnvGuard bad("SPINHOP_SEED", "not-a-number");
    RunConfig cfg;
    try {
      apply_env_overrides(cfg);
      FAIL("bad SPINHOP_SEED accepted");
    } catch (const ConfigError& e) {
      CHECK(mentions(e, "SPINHOP_SEED"));
    }
  }
  {
    EnvGuard bad("SPINHOP_VALIDATE", "maybe");
    RunConfig cfg;
    CHECK_THROWS_AS(apply_env_overrides(cfg), ConfigError);
  }
  RunConfig untouched;
  apply_env_overrides(untouched);  // nothing set: a no-op
  CHECK(untouched.seed == 1);
}

TEST_CASE("config files load from disk") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
  const std::string path = "/tmp/spinhop_test_config.json";
  {
    RunConfig cfg;
    cfg.seed = 17;
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f);
    const std::string text = config_to_json(cfg).dump(2);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }
  CHECK(load_config_file(path).seed == 17);
  std::remove(path.c_str());
}
