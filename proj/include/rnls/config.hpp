#pragma once

#include <string>
#include <vector>

#include "rnls/evolution.hpp"

namespace rnls {

struct InitialCondition {
  std::string kind = "gaussian";  // gaussian | checkpoint | ground_state_scaled
  double amplitude = 1.0;
  double y_width = 1.0;
  double z_width = 1.0;
  double z_velocity = 0.0;
  std::string path;               // checkpoint, or a stored Q for ground_state_scaled
  double amplitude_factor = 1.0;

  bool operator==(const InitialCondition&) const = default;
};

struct GroundStateConfig {
  double d = 0;          // stored threshold; 0 means unknown
  int max_iter = 2000;
  double tol = 1e-8;
  double y_width = 1.5;  // Petviashvili seed widths
  double z_width = 1.0;

  bool operator==(const GroundStateConfig&) const = default;
};

struct SimulationConfig {
  NonlinearityParams nl{1.0, -1.0};
  BasisSpec basis;
  SchemeConfig scheme;
  InitialCondition initial;
  GroundStateConfig ground_state;
  std::string output_dir = "out";
  int checkpoint_every = 0;        // steps; 0 writes only the final checkpoint
  std::string virial_weight = "z2";

  bool operator==(const SimulationConfig& o) const;
};

/// Flat INI-like grammar: `key = value` lines, `[section]` headers that
/// prefix following keys with `section.`, `#` comments. Unknown keys and
/// malformed values are collected and reported together as a ConfigError.
SimulationConfig parse_config(const std::string& text);
SimulationConfig load_config(const std::string& path);

/// Applies one `section.key=value` override (same validation as the parser).
void set_config_value(SimulationConfig& cfg, const std::string& key, const std::string& value);

/// Throws ConfigError listing every violated invariant.
void validate(const SimulationConfig& cfg, bool check_files = true);

std::string serialize(const SimulationConfig& cfg);

/// Every accepted key, in serialization order.
std::vector<std::string> config_keys();

}  // namespace rnls
