#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "satqkd/kernels.hpp"
#include "satqkd/sweep.hpp"

namespace satqkd::cli {

enum class GridSpacing { linear, log };

// Physical Earth inputs, kept so the resolved config can be printed in SI.
struct EarthInputs {
  double gm = constants::earth_gm;
  double radius = constants::earth_radius;
  double angular_velocity = constants::earth_angular_velocity;
  double angular_momentum = constants::earth_angular_momentum;
  int orbit_direction = +1;
};

struct SweepSettings {
  keyrate::SweepParameter parameter = keyrate::SweepParameter::height;
  double start = constants::geostationary_height / 1000.0;
  double stop = constants::geostationary_height;
  std::size_t points = 1000;
  GridSpacing spacing = GridSpacing::linear;
  SweepMode mode = SweepMode::gravity_only;
  unsigned threads = 1;
  std::optional<kernels::Isa> kernel;  // empty: best available
};

struct RunConfig {
  EarthInputs earth;
  keyrate::Scenario scenario;
  std::optional<double> wavelength;  // empty: c / Ω₀
  SweepSettings sweep;
  std::string output_path;

  // Keys assigned by the file or flags, as opposed to built-in defaults.
  std::set<std::string> explicit_keys;

  bool is_explicit(std::string_view key) const {
    return explicit_keys.count(std::string(key)) != 0;
  }

  // Fully resolved scenario (Earth geometrized, wavelength filled in).
  keyrate::Scenario resolved_scenario() const;
  keyrate::SweepSpec sweep_spec() const;
};

using Override = std::pair<std::string, std::string>;

// Parses `key = value` lines (`#` starts a comment), then applies the
// overrides in order on top. Built-in defaults fill everything else. Throws
// ConfigError naming the key and its accepted range.
RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides = {});

// Assigns one key on an existing config (same validation as parse_config).
void set_value(RunConfig& cfg, std::string_view key, std::string_view value);
// Cross-key validation; parse_config calls it after merging.
void validate(const RunConfig& cfg);

// Every key with its resolved value, in registry order.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& cfg);
// Accepted keys and a description of their range.
std::vector<std::pair<std::string, std::string>> key_reference();

}  // namespace satqkd::cli
