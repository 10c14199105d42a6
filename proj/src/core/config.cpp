#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "errors.hpp"

namespace spinhop {
namespace {

using nlohmann::json;

// Reads one field, enforcing presence in `allowed` is handled by the caller;
// here we only convert with a key-qualified error message.
template <typename T>
void read_field(const json& obj, const std::string& section, const char* key,
                T& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    it->get_to(out);
  } catch (const json::exception&) {
    throw ConfigError("config key has the wrong type: " + section + "." + key);
  }
}

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigError("unknown config key: " +
                        (section.empty() ? item.key() : section + "." + item.key()));
  }
}

const json* section(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) return nullptr;
  if (!it->is_object())
    throw ConfigError(std::string("config section must be an object: ") + name);
  return &*it;
}

}  // namespace

CalibrationMode parse_calibration_mode(const std::string& name) {
  if (name == "balanced") return CalibrationMode::balanced;
  if (name == "eq6") return CalibrationMode::eq6_literal;
  if (name == "eq7") return CalibrationMode::eq7_literal;
  if (name == "eq8") return CalibrationMode::eq8_literal;
  if (name == "explicit") return CalibrationMode::explicit_value;
  throw ConfigError("unknown calibration mode: " + name +
                    " (expected balanced, eq6, eq7, eq8, or explicit)");
}

std::string calibration_mode_name(CalibrationMode mode) {
  switch (mode) {
    case CalibrationMode::balanced: return "balanced";
    case CalibrationMode::eq6_literal: return "eq6";
    case CalibrationMode::eq7_literal: return "eq7";
    case CalibrationMode::eq8_literal: return "eq8";
    case CalibrationMode::explicit_value: return "explicit";
  }
  return "balanced";
}

RunSettings RunConfig::to_settings() const {
  RunSettings s;
  s.device.lande_g = device.lande_g;
  s.device.polarization = device.polarization;
  s.device.cross_section = device.cross_section_nm2 * 1e-18;
  s.device.track_length = device.track_length_nm * 1e-9;
  s.device.mtj_width = device.mtj_width_nm * 1e-9;
  s.device.mtj_placement = device.mtj_placement_fraction;
  s.device.msat = device.msat_a_per_m;
  s.device.soma_leak = device.soma_leak_m_per_s;
  s.device.axon_leak = device.axon_leak_m_per_s;
  s.device.r_parallel = device.r_parallel_ohm;
  s.device.r_antiparallel = device.r_antiparallel_ohm;
  s.device.r_metal = device.r_metal_ohm;
  try {
    s.device.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad device configuration: ") + e.what());
  }

  s.sim.dt = sim.dt_ps * 1e-12;
  s.sim.t_max = sim.t_max_ns * 1e-9;
  s.sim.hold_window = sim.hold_window_ns * 1e-9;
  s.sim.pin_tolerance = sim.pin_tolerance_nm * 1e-9;
  s.sim.chargeup_t_cap = sim.chargeup_t_cap_ns * 1e-9;
  s.sim.validate_each_step = sim.validate_each_step;
  s.sim.zero_weights_during_chargeup = sim.zero_weights_during_chargeup;
  s.sim.trace_every_steps = sim.trace_every_steps;
  if (!(s.sim.dt > 0)) throw ConfigError("sim.dt_ps must be positive");
  if (!(s.sim.t_max >= s.sim.dt))
    throw ConfigError("sim.t_max_ns must cover at least one step");
  if (sim.trace_every_steps < 0)
    throw ConfigError("sim.trace_every_steps must be non-negative");

  s.w_mag = network.w_mag_v;
  s.normalize_weights = network.normalize_weights;
  s.v_c = network.v_c_v;
  s.calibration = parse_calibration_mode(network.calibration);
  s.explicit_v_dw = network.explicit_v_dw_v;
  s.literal_branch_count = network.literal_branch_count;
  s.maxcut_penalty = network.maxcut_penalty;
  if (!(s.w_mag > 0)) throw ConfigError("network.w_mag_v must be positive");
  if (!(s.v_c >= 0)) throw ConfigError("network.v_c_v must be non-negative");
  if (!(s.maxcut_penalty > 0))
    throw ConfigError("network.maxcut_penalty must be positive");

  s.threads = threads;
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    s.threads = hw > 0 ? static_cast<int>(hw) : 1;
  }
  return s;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  reject_unknown(j, "", {"device", "sim", "network", "threads", "seed"});

  RunConfig cfg;
  if (const json* d = section(j, "device")) {
    reject_unknown(*d, "device",
                   {"lande_g", "polarization", "cross_section_nm2",
                    "track_length_nm", "mtj_width_nm", "mtj_placement_fraction",
                    "msat_a_per_m", "soma_leak_m_per_s", "axon_leak_m_per_s",
                    "r_parallel_ohm", "r_antiparallel_ohm", "r_metal_ohm"});
    read_field(*d, "device", "lande_g", cfg.device.lande_g);
    read_field(*d, "device", "polarization", cfg.device.polarization);
    read_field(*d, "device", "cross_section_nm2", cfg.device.cross_section_nm2);
    read_field(*d, "device", "track_length_nm", cfg.device.track_length_nm);
    read_field(*d, "device", "mtj_width_nm", cfg.device.mtj_width_nm);
    read_field(*d, "device", "mtj_placement_fraction",
               cfg.device.mtj_placement_fraction);
    read_field(*d, "device", "msat_a_per_m", cfg.device.msat_a_per_m);
    read_field(*d, "device", "soma_leak_m_per_s", cfg.device.soma_leak_m_per_s);
    read_field(*d, "device", "axon_leak_m_per_s", cfg.device.axon_leak_m_per_s);
    read_field(*d, "device", "r_parallel_ohm", cfg.device.r_parallel_ohm);
    read_field(*d, "device", "r_antiparallel_ohm", cfg.device.r_antiparallel_ohm);
    read_field(*d, "device", "r_metal_ohm", cfg.device.r_metal_ohm);
  }
  if (const json* sm = section(j, "sim")) {
    reject_unknown(*sm, "sim",
                   {"dt_ps", "t_max_ns", "hold_window_ns", "pin_tolerance_nm",
                    "chargeup_t_cap_ns", "validate_each_step",
                    "zero_weights_during_chargeup", "trace_every_steps"});
    read_field(*sm, "sim", "dt_ps", cfg.sim.dt_ps);
    read_field(*sm, "sim", "t_max_ns", cfg.sim.t_max_ns);
    read_field(*sm, "sim", "hold_window_ns", cfg.sim.hold_window_ns);
    read_field(*sm, "sim", "pin_tolerance_nm", cfg.sim.pin_tolerance_nm);
    read_field(*sm, "sim", "chargeup_t_cap_ns", cfg.sim.chargeup_t_cap_ns);
    read_field(*sm, "sim", "validate_each_step", cfg.sim.validate_each_step);
    read_field(*sm, "sim", "zero_weights_during_chargeup",
               cfg.sim.zero_weights_during_chargeup);
    read_field(*sm, "sim", "trace_every_steps", cfg.sim.trace_every_steps);
  }
  if (const json* nw = section(j, "network")) {
    reject_unknown(*nw, "network",
                   {"w_mag_v", "normalize_weights", "v_c_v", "calibration",
                    "explicit_v_dw_v", "literal_branch_count", "maxcut_penalty"});
    read_field(*nw, "network", "w_mag_v", cfg.network.w_mag_v);
    read_field(*nw, "network", "normalize_weights", cfg.network.normalize_weights);
    read_field(*nw, "network", "v_c_v", cfg.network.v_c_v);
    read_field(*nw, "network", "calibration", cfg.network.calibration);
    read_field(*nw, "network", "explicit_v_dw_v", cfg.network.explicit_v_dw_v);
    read_field(*nw, "network", "literal_branch_count",
               cfg.network.literal_branch_count);
    read_field(*nw, "network", "maxcut_penalty", cfg.network.maxcut_penalty);
  }
  read_field(j, "", "threads", cfg.threads);
  read_field(j, "", "seed", cfg.seed);

  parse_calibration_mode(cfg.network.calibration);  // fail fast on typos
  return cfg;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  json j;
  j["device"] = {
      {"lande_g", cfg.device.lande_g},
      {"polarization", cfg.device.polarization},
      {"cross_section_nm2", cfg.device.cross_section_nm2},
      {"track_length_nm", cfg.device.track_length_nm},
      {"mtj_width_nm", cfg.device.mtj_width_nm},
      {"mtj_placement_fraction", cfg.device.mtj_placement_fraction},
      {"msat_a_per_m", cfg.device.msat_a_per_m},
      {"soma_leak_m_per_s", cfg.device.soma_leak_m_per_s},
      {"axon_leak_m_per_s", cfg.device.axon_leak_m_per_s},
      {"r_parallel_ohm", cfg.device.r_parallel_ohm},
      {"r_antiparallel_ohm", cfg.device.r_antiparallel_ohm},
      {"r_metal_ohm", cfg.device.r_metal_ohm},
  };
  j["sim"] = {
      {"dt_ps", cfg.sim.dt_ps},
      {"t_max_ns", cfg.sim.t_max_ns},
      {"hold_window_ns", cfg.sim.hold_window_ns},
      {"pin_tolerance_nm", cfg.sim.pin_tolerance_nm},
      {"chargeup_t_cap_ns", cfg.sim.chargeup_t_cap_ns},
      {"validate_each_step", cfg.sim.validate_each_step},
      {"zero_weights_during_chargeup", cfg.sim.zero_weights_during_chargeup},
      {"trace_every_steps", cfg.sim.trace_every_steps},
  };
  j["network"] = {
      {"w_mag_v", cfg.network.w_mag_v},
      {"normalize_weights", cfg.network.normalize_weights},
      {"v_c_v", cfg.network.v_c_v},
      {"calibration", cfg.network.calibration},
      {"explicit_v_dw_v", cfg.network.explicit_v_dw_v},
      {"literal_branch_count", cfg.network.literal_branch_count},
      {"maxcut_penalty", cfg.network.maxcut_penalty},
  };
  j["threads"] = cfg.threads;
  j["seed"] = cfg.seed;
  return j;
}

void apply_env_overrides(RunConfig& cfg) {
  const auto read_env = [](const char* name) -> const char* {
    return std::getenv(name);
  };
  if (const char* v = read_env("SPINHOP_SEED")) {
    try {
      cfg.seed = std::stoull(v);
    } catch (...) {
      throw ConfigError("SPINHOP_SEED must be an unsigned integer");
    }
  }
  if (const char* v = read_env("SPINHOP_THREADS")) {
    try {
      cfg.threads = std::stoi(v);
    } catch (...) {
      throw ConfigError("SPINHOP_THREADS must be an integer");
    }
  }
  if (const char* v = read_env("SPINHOP_DT_PS")) {
    try {
      cfg.sim.dt_ps = std::stod(v);
    } catch (...) {
      throw ConfigError("SPINHOP_DT_PS must be a number");
    }
  }
  if (const char* v = read_env("SPINHOP_T_MAX_NS")) {
    try {
      cfg.sim.t_max_ns = std::stod(v);
    } catch (...) {
      throw ConfigError("SPINHOP_T_MAX_NS must be a number");
    }
  }
  if (const char* v = read_env("SPINHOP_VALIDATE")) {
    const std::string s(v);
    if (s == "1" || s == "true") cfg.sim.validate_each_step = true;
    else if (s == "0" || s == "false") cfg.sim.validate_each_step = false;
    else throw ConfigError("SPINHOP_VALIDATE must be 0/1/true/false");
  }
  if (const char* v = read_env("SPINHOP_TRACE_EVERY_STEPS")) {
    try {
      cfg.sim.trace_every_steps = std::stoi(v);
    } catch (...) {
      throw ConfigError("SPINHOP_TRACE_EVERY_STEPS must be an integer");
    }
  }
}

}  // namespace spinhop
