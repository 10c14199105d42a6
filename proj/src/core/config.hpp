#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "tasks.hpp"

namespace spinhop {

// User-facing run configuration. Fields carry the JSON schema's display units
// (nm, ps, ns, V) and are the source of truth: dumping and reloading a config
// reproduces these doubles bit-for-bit, so reruns are bit-identical.
struct RunConfig {
  struct Device {
    double lande_g = 2.1;
    double polarization = 0.7;
    double cross_section_nm2 = 50.0;
    double track_length_nm = 100.0;
    double mtj_width_nm = 20.0;
    double mtj_placement_fraction = 0.5;
    double msat_a_per_m = 8e5;
    double soma_leak_m_per_s = 0.2;
    double axon_leak_m_per_s = -5.0;
    double r_parallel_ohm = 500.0;
    double r_antiparallel_ohm = 2000.0;
    double r_metal_ohm = 2000.0;
  } device;

  struct Sim {
    double dt_ps = 1.0;
    double t_max_ns = 2000.0;
    double hold_window_ns = 5.0;
    double pin_tolerance_nm = 0.1;
    double chargeup_t_cap_ns = 20.0;
    bool validate_each_step = false;
    bool zero_weights_during_chargeup = false;
    int trace_every_steps = 0;
  } sim;

  struct Net {
    double w_mag_v = 0.1;
    bool normalize_weights = false;
    double v_c_v = 0.25;
    std::string calibration = "balanced";  // balanced|eq6|eq7|eq8|explicit
    double explicit_v_dw_v = 0.0;
    bool literal_branch_count = false;
    double maxcut_penalty = 1.05;
  } network;

  int threads = 1;  // 0 = one per hardware thread
  uint64_t seed = 1;

  // Converts to SI simulation settings; throws ConfigError on bad values.
  RunSettings to_settings() const;
};

CalibrationMode parse_calibration_mode(const std::string& name);
std::string calibration_mode_name(CalibrationMode mode);

// Missing keys keep their defaults; unknown keys raise ConfigError naming the
// offending key; wrong-typed values raise ConfigError naming the key.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);
nlohmann::json config_to_json(const RunConfig& cfg);

// Applies SPINHOP_* environment overrides (SEED, THREADS, DT_PS, T_MAX_NS,
// VALIDATE, TRACE_EVERY_STEPS). Bad values raise ConfigError naming the
// variable.
void apply_env_overrides(RunConfig& cfg);

}  // namespace spinhop
