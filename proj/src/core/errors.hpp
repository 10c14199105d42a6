#pragma once

#include <stdexcept>
#include <string>

namespace spinhop {

// Bad user-facing configuration (unknown key, out-of-range value, missing file).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (graph files, sidecars, image grids). Carries a 1-based line.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
  int line_number;
};

// NaN/inf escaped a circuit solve; the trial is aborted, not the process.
struct NumericFault : std::runtime_error {
  explicit NumericFault(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spinhop
