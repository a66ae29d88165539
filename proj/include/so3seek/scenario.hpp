#pragma once

// Scenario files: a YAML document mirroring SimConfig plus a name and
// description. Every map is checked against its allowed keys; unknown keys
// are rejected before anything runs.
//
// Scalars accept plain numbers or multiples of pi ("pi", "-pi/20", "0.5*pi",
// "3pi/4"). Rotations accept either `rotation_vector: [x, y, z]` or
// `matrix: [9 values, row-major]`.

#include <filesystem>
#include <string>
#include <string_view>

#include "so3seek/sim.hpp"

namespace so3seek {

struct ScenarioFile {
  std::string name;
  std::string description;
  SimConfig config;
};

/// Throws ConfigError with the offending key path on schema violations.
ScenarioFile parse_scenario(std::string_view text);
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Canonical YAML form with every key present. parse(emit(s)) reproduces s,
/// and emit is idempotent on its own output.
std::string emit_scenario(const ScenarioFile& scenario);

/// Parses "1.5", "pi", "-pi/20", "0.5*pi", "3pi/4".
double parse_real(std::string_view text);

}  // namespace so3seek
