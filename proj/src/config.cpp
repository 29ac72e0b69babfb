#include "satqkd/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <system_error>

#include "satqkd/csv.hpp"
#include "satqkd/errors.hpp"

namespace satqkd::cli {

namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct KeyDef {
  std::string key;
  std::string range;
  Setter set;
  Getter get;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view key, std::string_view value, std::string_view range) {
  std::string msg = std::string(key) + ": invalid value '" + std::string(value) +
                    "', accepted: " + std::string(range);
  throw ConfigError(std::string(key), msg);
}

double to_double(std::string_view key, std::string_view value, std::string_view range) {
  double v = 0.0;
  const char* begin = value.data();
  const char* end = value.data() + value.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) fail(key, value, range);
  return v;
}

template <class Pred>
Setter number(std::string_view range, Pred ok, std::function<void(RunConfig&, double)> assign) {
  return [range = std::string(range), ok, assign](RunConfig& c, std::string_view v) {
    const double x = to_double("", v, range);
    if (!ok(x)) throw std::invalid_argument(range);
    assign(c, x);
  };
}

std::string fmt(double v) { return csv::format_double(v); }

std::vector<KeyDef> build_registry() {
  using P = const double;
  std::vector<KeyDef> r;
  const auto add = [&](std::string key, std::string range, Setter set, Getter get) {
    r.push_back({std::move(key), std::move(range), std::move(set), std::move(get)});
  };
  const auto positive = [](P x) { return x > 0.0; };
  const auto non_negative = [](P x) { return x >= 0.0; };
  const auto unit_open = [](P x) { return x > 0.0 && x <= 1.0; };
  const auto unit_closed = [](P x) { return x >= 0.0 && x <= 1.0; };

  add("earth.gm_m3_s2", "> 0", number("> 0", positive, [](RunConfig& c, P x) { c.earth.gm = x; }),
      [](const RunConfig& c) { return fmt(c.earth.gm); });
  add("earth.radius_m", "> 0",
      number("> 0", positive, [](RunConfig& c, P x) { c.earth.radius = x; }),
      [](const RunConfig& c) { return fmt(c.earth.radius); });
  add("earth.angular_velocity_rad_s", ">= 0",
      number(">= 0", non_negative, [](RunConfig& c, P x) { c.earth.angular_velocity = x; }),
      [](const RunConfig& c) { return fmt(c.earth.angular_velocity); });
  add("earth.angular_momentum_kg_m2_s", ">= 0",
      number(">= 0", non_negative, [](RunConfig& c, P x) { c.earth.angular_momentum = x; }),
      [](const RunConfig& c) { return fmt(c.earth.angular_momentum); });
  add("earth.orbit_direction", "+1 (co-rotating) or -1",
      number("+1 or -1", [](P x) { return x == 1.0 || x == -1.0; },
             [](RunConfig& c, P x) { c.earth.orbit_direction = x > 0 ? 1 : -1; }),
      [](const RunConfig& c) { return std::to_string(c.earth.orbit_direction); });

  add("packet.omega0_hz", "> 0, and omega0/sigma > 1000",
      number("> 0", positive, [](RunConfig& c, P x) { c.scenario.peak_frequency = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.peak_frequency); });
  add("packet.sigma_hz", "> 0, and omega0/sigma > 1000",
      number("> 0", positive, [](RunConfig& c, P x) { c.scenario.bandwidth = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.bandwidth); });

  add("setup.efficiency", "in (0, 1]",
      number("in (0, 1]", unit_open,
             [](RunConfig& c, P x) { c.scenario.setup.setup_efficiency = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.setup.setup_efficiency); });
  add("setup.alpha0_per_m", "> 0",
      number("> 0", positive,
             [](RunConfig& c, P x) { c.scenario.setup.extinction_coefficient = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.setup.extinction_coefficient); });
  add("setup.scale_height_m", "> 0",
      number("> 0", positive,
             [](RunConfig& c, P x) { c.scenario.setup.extinction_scale_height = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.setup.extinction_scale_height); });
  add("setup.beam_waist_m", "> 0",
      number("> 0", positive, [](RunConfig& c, P x) { c.scenario.setup.beam_waist = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.setup.beam_waist); });
  add("setup.aperture_m", "> 0",
      number("> 0", positive,
             [](RunConfig& c, P x) { c.scenario.setup.receiver_aperture = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.setup.receiver_aperture); });
  add("setup.wavelength_m", "> 0, or auto (c / omega0)",
      [](RunConfig& c, std::string_view v) {
        if (v == "auto") {
          c.wavelength.reset();
          return;
        }
        const double x = to_double("", v, "");
        if (!(x > 0.0)) throw std::invalid_argument("");
        c.wavelength = x;
      },
      [](const RunConfig& c) {
        return fmt(c.wavelength.value_or(constants::speed_of_light / c.scenario.peak_frequency));
      });
  add("setup.fiber_loss_db_per_km", ">= 0",
      number(">= 0", non_negative,
             [](RunConfig& c, P x) { c.scenario.setup.fiber_loss_db_per_km = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.setup.fiber_loss_db_per_km); });

  add("link.height_m", ">= 0",
      number(">= 0", non_negative, [](RunConfig& c, P x) { c.scenario.height = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.height); });
  add("link.zenith_rad", "in [0, pi/2)",
      number("in [0, pi/2)", [](P x) { return x >= 0.0 && x < 0.5 * std::numbers::pi; },
             [](RunConfig& c, P x) { c.scenario.zenith_angle = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.zenith_angle); });
  add("link.loss_model", "freespace | fiber_equivalent",
      [](RunConfig& c, std::string_view v) {
        c.scenario.loss_model = parse_loss_model(v).value();
      },
      [](const RunConfig& c) { return std::string(to_string(c.scenario.loss_model)); });

  add("channel.delta_method", "perturbative | exact",
      [](RunConfig& c, std::string_view v) {
        c.scenario.delta_method = parse_delta_method(v).value();
      },
      [](const RunConfig& c) { return std::string(to_string(c.scenario.delta_method)); });
  add("channel.overlap_formula", "derived | printed",
      [](RunConfig& c, std::string_view v) {
        c.scenario.overlap_formula = parse_overlap_formula(v).value();
      },
      [](const RunConfig& c) { return std::string(to_string(c.scenario.overlap_formula)); });
  add("channel.delta", "> -1, or auto (from the height)",
      [](RunConfig& c, std::string_view v) {
        if (v == "auto") {
          c.scenario.forced_delta.reset();
          return;
        }
        const double x = to_double("", v, "");
        if (!(x > -1.0)) throw std::invalid_argument("");
        c.scenario.forced_delta = x;
      },
      [](const RunConfig& c) {
        return c.scenario.forced_delta ? fmt(*c.scenario.forced_delta) : std::string("auto");
      });

  add("protocol.variance", ">= 1",
      number(">= 1", [](P x) { return x >= 1.0; },
             [](RunConfig& c, P x) { c.scenario.protocol.variance = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.protocol.variance); });
  add("protocol.excess_noise", ">= 0",
      number(">= 0", non_negative,
             [](RunConfig& c, P x) { c.scenario.protocol.excess_noise = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.protocol.excess_noise); });
  add("protocol.transmissivity", "in (0, 1]",
      number("in (0, 1]", unit_open,
             [](RunConfig& c, P x) { c.scenario.protocol.transmissivity = x; }),
      [](const RunConfig& c) { return fmt(c.scenario.protocol.transmissivity); });
  add("protocol.overlap", "in [0, 1], or auto (from delta)",
      [unit_closed](RunConfig& c, std::string_view v) {
        if (v == "auto") {
          c.scenario.forced_overlap.reset();
          return;
        }
        const double x = to_double("", v, "");
        if (!unit_closed(x)) throw std::invalid_argument("");
        c.scenario.forced_overlap = x;
      },
      [](const RunConfig& c) {
        return c.scenario.forced_overlap ? fmt(*c.scenario.forced_overlap) : std::string("auto");
      });
  add("protocol.noise", "chi | epsilon_only",
      [](RunConfig& c, std::string_view v) {
        c.scenario.protocol.noise = parse_noise_convention(v).value();
      },
      [](const RunConfig& c) { return std::string(to_string(c.scenario.protocol.noise)); });
  add("protocol.lambda3", "det | diagonal",
      [](RunConfig& c, std::string_view v) {
        c.scenario.protocol.lambda3 = parse_lambda3_convention(v).value();
      },
      [](const RunConfig& c) { return std::string(to_string(c.scenario.protocol.lambda3)); });

  add("sweep.parameter", "height | bandwidth | variance | excess_noise | zenith_angle",
      [](RunConfig& c, std::string_view v) {
        c.sweep.parameter = keyrate::parse_sweep_parameter(v).value();
      },
      [](const RunConfig& c) { return std::string(keyrate::to_string(c.sweep.parameter)); });
  add("sweep.start", "finite number in the swept parameter's units",
      number("finite", [](P) { return true; }, [](RunConfig& c, P x) { c.sweep.start = x; }),
      [](const RunConfig& c) { return fmt(c.sweep.start); });
  add("sweep.stop", "finite number in the swept parameter's units",
      number("finite", [](P) { return true; }, [](RunConfig& c, P x) { c.sweep.stop = x; }),
      [](const RunConfig& c) { return fmt(c.sweep.stop); });
  add("sweep.points", "integer in [1, 10000000]",
      number("integer", [](P x) { return x >= 1.0 && x <= 1e7 && x == std::floor(x); },
             [](RunConfig& c, P x) { c.sweep.points = static_cast<std::size_t>(x); }),
      [](const RunConfig& c) { return std::to_string(c.sweep.points); });
  add("sweep.spacing", "linear | log",
      [](RunConfig& c, std::string_view v) {
        if (v == "linear") {
          c.sweep.spacing = GridSpacing::linear;
        } else if (v == "log") {
          c.sweep.spacing = GridSpacing::log;
        } else {
          throw std::invalid_argument("");
        }
      },
      [](const RunConfig& c) {
        return std::string(c.sweep.spacing == GridSpacing::log ? "log" : "linear");
      });
  add("sweep.mode", "gravity_only | full_link",
      [](RunConfig& c, std::string_view v) { c.sweep.mode = parse_sweep_mode(v).value(); },
      [](const RunConfig& c) { return std::string(to_string(c.sweep.mode)); });
  add("sweep.threads", "integer in [1, 256]",
      number("integer", [](P x) { return x >= 1.0 && x <= 256.0 && x == std::floor(x); },
             [](RunConfig& c, P x) { c.sweep.threads = static_cast<unsigned>(x); }),
      [](const RunConfig& c) { return std::to_string(c.sweep.threads); });
  add("sweep.kernel", "auto | scalar | avx2",
      [](RunConfig& c, std::string_view v) {
        if (v == "auto") {
          c.sweep.kernel.reset();
          return;
        }
        const auto isa = kernels::parse_isa(v).value();
        if (!kernels::isa_available(isa)) throw std::invalid_argument("");
        c.sweep.kernel = isa;
      },
      [](const RunConfig& c) {
        return std::string(kernels::to_string(c.sweep.kernel.value_or(kernels::best_isa())));
      });

  add("output.path", "file path (empty: standard output)",
      [](RunConfig& c, std::string_view v) { c.output_path = std::string(v); },
      [](const RunConfig& c) { return c.output_path.empty() ? std::string("-") : c.output_path; });
  return r;
}

const std::vector<KeyDef>& registry() {
  static const std::vector<KeyDef> r = build_registry();
  return r;
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\''))) {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

}  // namespace

keyrate::Scenario RunConfig::resolved_scenario() const {
  keyrate::Scenario s = scenario;
  s.earth = relativity::EarthModel::from_physical(earth.gm, earth.radius, earth.angular_velocity,
                                                  earth.angular_momentum, earth.orbit_direction);
  s.setup.wavelength = wavelength.value_or(constants::speed_of_light / scenario.peak_frequency);
  return s;
}

keyrate::SweepSpec RunConfig::sweep_spec() const {
  keyrate::SweepSpec spec;
  spec.parameter = sweep.parameter;
  spec.grid = sweep.spacing == GridSpacing::log
                  ? keyrate::log_grid(sweep.start, sweep.stop, sweep.points)
                  : keyrate::linear_grid(sweep.start, sweep.stop, sweep.points);
  spec.mode = sweep.mode;
  spec.fixed = resolved_scenario();
  spec.threads = sweep.threads;
  spec.isa = sweep.kernel.value_or(kernels::best_isa());
  return spec;
}

void set_value(RunConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string value = unquote(trim(raw));
  for (const auto& def : registry()) {
    if (def.key != key) continue;
    try {
      def.set(cfg, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail(key, value, def.range);
    }
    cfg.explicit_keys.insert(def.key);
    return;
  }
  throw ConfigError(std::string(key), std::string(key) + ": unknown configuration key");
}

void validate(const RunConfig& cfg) {
  const keyrate::Scenario s = [&] {
    try {
      return cfg.resolved_scenario();
    } catch (const std::exception& e) {
      throw ConfigError("earth", std::string("earth: ") + e.what());
    }
  }();
  const auto wrap = [](const char* key, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(key, std::string(key) + ": " + e.what());
    }
  };
  wrap("packet", [&] { relativity::WavePacket::narrowband(s.peak_frequency, s.bandwidth); });
  wrap("setup", [&] { s.setup.validate(); });
  wrap("protocol", [&] { s.protocol.validate(); });

  const auto& sw = cfg.sweep;
  const std::string range = [&]() -> std::string {
    switch (sw.parameter) {
      case keyrate::SweepParameter::height: return ">= 0 m";
      case keyrate::SweepParameter::bandwidth: return "> 0 Hz";
      case keyrate::SweepParameter::variance: return ">= 1";
      case keyrate::SweepParameter::excess_noise: return ">= 0";
      case keyrate::SweepParameter::zenith_angle: return "in [0, pi/2) rad";
    }
    return "";
  }();
  const auto in_range = [&](double x) {
    switch (sw.parameter) {
      case keyrate::SweepParameter::height: return x >= 0.0;
      case keyrate::SweepParameter::bandwidth: return x > 0.0;
      case keyrate::SweepParameter::variance: return x >= 1.0;
      case keyrate::SweepParameter::excess_noise: return x >= 0.0;
      case keyrate::SweepParameter::zenith_angle: return x >= 0.0 && x < 0.5 * std::numbers::pi;
    }
    return false;
  };
  if (!in_range(sw.start)) fail("sweep.start", fmt(sw.start), range);
  if (!in_range(sw.stop)) fail("sweep.stop", fmt(sw.stop), range);
  if (sw.spacing == GridSpacing::log && !(sw.start > 0.0 && sw.stop > 0.0)) {
    fail("sweep.spacing", "log", "log spacing needs positive start and stop");
  }
  if (sw.points > 1 && sw.start == sw.stop) {
    fail("sweep.points", std::to_string(sw.points), "1 when sweep.start equals sweep.stop");
  }
}

RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no),
                        "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    set_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  for (const auto& [key, value] : overrides) set_value(cfg, key, value);
  validate(cfg);
  return cfg;
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& def : registry()) out.emplace_back(def.key, def.get(cfg));
  return out;
}

std::vector<std::pair<std::string, std::string>> key_reference() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& def : registry()) out.emplace_back(def.key, def.range);
  return out;
}

}  // namespace satqkd::cli
