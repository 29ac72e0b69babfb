#include "satqkd/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "satqkd/config.hpp"
#include "satqkd/csv.hpp"
#include "satqkd/errors.hpp"

namespace satqkd::cli {

namespace {

using Entries = std::vector<std::pair<std::string, std::string>>;

// Keeps error output on one line.
std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '"', '\'');
  return s;
}

int report(std::ostream& err, int code, std::string_view kind, std::string_view key,
           const std::string& message) {
  err << "satqkd: error kind=" << kind << " key=" << (key.empty() ? "-" : key) << " message=\""
      << one_line(message) << "\"\n";
  return code;
}

std::string fmt(double v) { return csv::format_double(v); }

Entries header_entries(const RunConfig& cfg, std::string_view command) {
  Entries e;
  e.emplace_back("command", std::string(command));
  for (auto& kv : resolved_entries(cfg)) e.push_back(std::move(kv));
  const keyrate::Scenario s = cfg.resolved_scenario();
  e.emplace_back("derived.mass_length_m", fmt(s.earth.mass_length));
  e.emplace_back("derived.schwarzschild_radius_m", fmt(s.earth.schwarzschild_radius));
  e.emplace_back("derived.kerr_length_m", fmt(s.earth.kerr_length));
  e.emplace_back("derived.omega0_over_sigma", fmt(s.peak_frequency / s.bandwidth));
  e.emplace_back("derived.rayleigh_range_m", fmt(s.setup.rayleigh_range()));
  e.emplace_back("constant.speed_of_light_m_s", fmt(constants::speed_of_light));
  e.emplace_back("constant.gravitational_constant", fmt(constants::gravitational_constant));
  e.emplace_back("convention.covariance", "vacuum-normalized, quadratures (x, p), modes (A, B)");
  e.emplace_back("convention.log_base", "2");
  e.emplace_back("convention.reconciliation", "direct, collective attacks");
  e.emplace_back("convention.channel_order", "overlap beam splitter, then thermal loss");
  e.emplace_back("convention.mu_reference", "same point with overlap = 1");
  e.emplace_back("tolerance.physical", fmt(constants::physical_tolerance));
  e.emplace_back("tolerance.entropy_limit_window", fmt(constants::entropy_limit_window));
  return e;
}

class Sink {
 public:
  Sink(std::ostream& fallback, const std::string& path) : fallback_(fallback), path_(path) {}

  bool to_file() const { return !path_.empty() && path_ != "-"; }

  void write(const std::string& content) {
    if (!to_file()) {
      fallback_ << content;
      return;
    }
    std::ofstream f(path_, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("output.path", "output.path: cannot open '" + path_ + "'");
    f << content;
    if (!f) throw ConfigError("output.path", "output.path: write failed for '" + path_ + "'");
  }

 private:
  std::ostream& fallback_;
  std::string path_;
};

std::string single_row(const RunConfig& cfg, std::string_view command, const csv::Row& row,
                       bool comments) {
  std::ostringstream os;
  if (comments) csv::write_comments(os, header_entries(cfg, command));
  os << csv::header << '\n' << csv::format_row(row) << '\n';
  return os.str();
}

void emit_single(const RunConfig& cfg, std::string_view command, const csv::Row& row,
                 std::ostream& out) {
  Sink sink(out, cfg.output_path);
  sink.write(single_row(cfg, command, row, sink.to_file()));
}

double resolved_delta(const keyrate::Scenario& s) {
  if (s.forced_delta) return *s.forced_delta;
  return relativity::frequency_shift(s.earth, s.height, s.delta_method).delta_total;
}

void fill_shift(csv::Row& row, const keyrate::Scenario& s) {
  if (s.forced_delta) {
    row[csv::delta] = *s.forced_delta;
    return;
  }
  const auto shift = relativity::frequency_shift(s.earth, s.height, s.delta_method);
  row[csv::h_m] = s.height;
  row[csv::delta] = shift.delta_total;
  row[csv::delta_sch] = shift.delta_schwarzschild;
  row[csv::delta_rot] = shift.delta_rotation;
  row[csv::delta_h] = shift.delta_higher;
}

void cmd_delta(const RunConfig& cfg, std::ostream& out) {
  const keyrate::Scenario s = cfg.resolved_scenario();
  csv::Row row{};
  row[csv::h_m] = s.height;
  fill_shift(row, s);
  emit_single(cfg, "delta", row, out);
}

void cmd_overlap(const RunConfig& cfg, std::ostream& out) {
  const keyrate::Scenario s = cfg.resolved_scenario();
  csv::Row row{};
  fill_shift(row, s);
  const auto packet = relativity::WavePacket::narrowband(s.peak_frequency, s.bandwidth);
  row[csv::theta_overlap] = relativity::overlap_closed_form(resolved_delta(s), packet,
                                                            s.overlap_formula);
  emit_single(cfg, "overlap", row, out);
}

void cmd_link(const RunConfig& cfg, std::ostream& out) {
  const keyrate::Scenario s = cfg.resolved_scenario();
  const link::LinkGeometry geom{s.height, s.zenith_angle, s.earth.equatorial_radius};
  const auto budget = link::link_budget(geom, s.setup, s.loss_model);
  csv::Row row{};
  row[csv::h_m] = s.height;
  row[csv::theta_rad] = s.zenith_angle;
  row[csv::T_total] = budget.total;
  row[csv::loss_db] = budget.loss_db;
  emit_single(cfg, "link", row, out);
}

void cmd_keyrate(const RunConfig& cfg, std::ostream& out) {
  keyrate::SweepSpec spec;
  spec.parameter = keyrate::SweepParameter::height;
  spec.fixed = cfg.resolved_scenario();
  spec.grid = {spec.fixed.height};
  spec.mode = cfg.sweep.mode;
  spec.isa = kernels::Isa::scalar;
  const auto rows = keyrate::run_sweep(spec);
  if (!rows[0].ok()) throw NumericalError(rows[0].error);
  emit_single(cfg, "keyrate", csv::from_sweep_row(rows[0]), out);
}

std::string sweep_document(const RunConfig& cfg, std::string_view command,
                           const std::vector<keyrate::SweepRow>& rows, const Entries& extra) {
  std::ostringstream os;
  csv::write_comments(os, header_entries(cfg, command));
  csv::write_comments(os, extra);
  if (cfg.sweep.parameter != keyrate::SweepParameter::height) {
    std::string grid;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) grid += ' ';
      grid += fmt(rows[i].grid_value);
    }
    os << "# sweep.grid_values = " << grid << '\n';
  }
  os << csv::header << '\n';
  for (const auto& row : rows) os << csv::format_row(csv::from_sweep_row(row)) << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok()) {
      os << "# row_error index=" << i << " grid_value=" << fmt(rows[i].grid_value) << ": "
         << one_line(rows[i].error) << '\n';
    }
  }
  return os.str();
}

void cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto rows = keyrate::run_sweep(cfg.sweep_spec());
  Sink(out, cfg.output_path).write(sweep_document(cfg, "sweep", rows, {}));
}

// Reproduction presets only touch keys the user left at their defaults.
void preset(RunConfig& cfg, std::string_view key, std::string_view value) {
  if (cfg.is_explicit(key)) return;
  set_value(cfg, key, value);
  cfg.explicit_keys.erase(std::string(key));
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::ostream& out) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("output.path", "output.path: cannot open '" + path.string() + "'");
  f << content;
  if (!f) throw ConfigError("output.path", "output.path: write failed for '" + path.string() + "'");
  out << path.string() << '\n';
}

std::string mhz_label(double hz) { return fmt(hz / 1e6) + "MHz"; }

void cmd_reproduce(RunConfig cfg, const std::string& figure, std::ostream& out) {
  const std::filesystem::path dir = cfg.output_path.empty() || cfg.output_path == "-"
                                        ? std::filesystem::path(".")
                                        : std::filesystem::path(cfg.output_path);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output.path", "output.path: cannot create '" + dir.string() + "'");

  const std::string command = "reproduce " + figure;
  preset(cfg, "sweep.parameter", "height");

  if (figure == "fig1") {
    preset(cfg, "sweep.mode", "full_link");
    preset(cfg, "sweep.spacing", "log");
    preset(cfg, "protocol.variance", "2");
    for (const char* eps : {"0.001", "0.005", "0.01"}) {
      RunConfig c = cfg;
      set_value(c, "protocol.excess_noise", eps);
      validate(c);
      const auto rows = keyrate::run_sweep(c.sweep_spec());
      write_file(dir / ("fig1_eps_" + std::string(eps) + ".csv"),
                 sweep_document(c, command, rows, {{"reproduce.series", "excess_noise"}}), out);
    }
    return;
  }

  preset(cfg, "sweep.mode", "gravity_only");
  const double sigmas[] = {0.8e6, 1.0e6, 1.2e6};
  std::vector<std::pair<double, std::vector<keyrate::SweepRow>>> series;
  for (double sigma : sigmas) {
    RunConfig c = cfg;
    set_value(c, "packet.sigma_hz", fmt(sigma));
    validate(c);
    auto rows = keyrate::run_sweep(c.sweep_spec());
    write_file(dir / (figure + "_sigma_" + mhz_label(sigma) + ".csv"),
               sweep_document(c, command, rows, {{"reproduce.series", "packet.sigma_hz"}}), out);
    series.emplace_back(sigma, std::move(rows));
  }
  if (figure != "fig3") return;

  // K(h) − K_ref per bandwidth on one grid; K_ref is the Θ = 1 rate.
  std::ostringstream os;
  csv::write_comments(os, header_entries(cfg, command));
  const auto& first = series.front().second;
  std::optional<double> k_ref;
  for (const auto& row : first) {
    if (row.ok()) {
      k_ref = row.reference_key_rate;
      break;
    }
  }
  os << "# K_ref_bits = " << (k_ref ? fmt(*k_ref) : std::string("n/a")) << '\n';
  os << "h_m";
  for (const auto& [sigma, rows] : series) os << ",dK_bits_sigma_" << mhz_label(sigma);
  os << '\n';
  for (std::size_t i = 0; i < first.size(); ++i) {
    os << fmt(first[i].height);
    for (const auto& [sigma, rows] : series) {
      os << ',';
      if (rows[i].ok()) os << fmt(rows[i].result.key_rate - rows[i].reference_key_rate);
    }
    os << '\n';
  }
  write_file(dir / "fig3_key_difference.csv", os.str(), out);
}

// Splits dotted `--section.key value` / `--section.key=value` overrides off
// the argument list; everything else goes to the option parser.
std::vector<std::string> extract_overrides(const std::vector<std::string>& args,
                                           std::vector<Override>& overrides) {
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    const bool dotted = a.rfind("--", 0) == 0 && a.find('.') != std::string::npos &&
                        a.find('.') < a.find('=');
    if (!dotted) {
      rest.push_back(a);
      continue;
    }
    const std::string body = a.substr(2);
    if (const auto eq = body.find('='); eq != std::string::npos) {
      overrides.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (i + 1 >= args.size()) throw ConfigError(body, body + ": missing value");
    overrides.emplace_back(body, args[++i]);
  }
  return rest;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("--config", "--config: cannot read '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    std::vector<Override> overrides;
    std::vector<std::string> rest = extract_overrides(args, overrides);

    CLI::App app{"Satellite CV-QKD key rates under the Earth's gravitational frequency shift",
                 "satqkd"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_path, mode, lambda3, noise, loss_model, kernel;
    app.add_option("--config", config_path, "line-oriented key = value file");
    app.add_option("--out", out_path, "output file (reproduce: directory)");
    app.add_option("--mode", mode, "gravity_only | full_link")
        ->check(CLI::IsMember({"gravity_only", "full_link"}));
    app.add_option("--lambda3", lambda3, "det | diagonal")
        ->check(CLI::IsMember({"det", "diagonal"}));
    app.add_option("--noise", noise, "chi | epsilon_only")
        ->check(CLI::IsMember({"chi", "epsilon_only"}));
    app.add_option("--loss-model", loss_model, "freespace | fiber_equivalent")
        ->check(CLI::IsMember({"freespace", "fiber_equivalent"}));
    app.add_option("--kernel", kernel, "auto | scalar | avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    std::string figure;
    auto* delta = app.add_subcommand("delta", "frequency shift at link.height_m");
    auto* overlap = app.add_subcommand("overlap", "wave-packet overlap");
    auto* link_cmd = app.add_subcommand("link", "free-space link budget");
    auto* keyrate_cmd = app.add_subcommand("keyrate", "single-point key rate");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep");
    auto* reproduce = app.add_subcommand("reproduce", "figure presets");
    reproduce->add_option("figure", figure, "fig1 | fig2 | fig3")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    app.footer("Any configuration key can be set as --<section>.<key> <value>.");

    try {
      std::reverse(rest.begin(), rest.end());
      app.parse(rest);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return exit_ok;
    } catch (const CLI::ParseError& e) {
      return report(err, exit_config_error, "config", "-", e.what());
    }

    if (out_path) overrides.emplace_back("output.path", *out_path);
    if (mode) overrides.emplace_back("sweep.mode", *mode);
    if (lambda3) overrides.emplace_back("protocol.lambda3", *lambda3);
    if (noise) overrides.emplace_back("protocol.noise", *noise);
    if (loss_model) overrides.emplace_back("link.loss_model", *loss_model);
    if (kernel) overrides.emplace_back("sweep.kernel", *kernel);

    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    const RunConfig cfg = parse_config(text, overrides);

    if (*delta) cmd_delta(cfg, out);
    if (*overlap) cmd_overlap(cfg, out);
    if (*link_cmd) cmd_link(cfg, out);
    if (*keyrate_cmd) cmd_keyrate(cfg, out);
    if (*sweep) cmd_sweep(cfg, out);
    if (*reproduce) cmd_reproduce(cfg, figure, out);
    return exit_ok;
  } catch (const ConfigError& e) {
    return report(err, exit_config_error, "config", e.key(), e.what());
  } catch (const DomainError& e) {
    return report(err, exit_numerical_error, "domain", "-", e.what());
  } catch (const NumericalError& e) {
    return report(err, exit_numerical_error, "numerical", "-", e.what());
  } catch (const std::exception& e) {
    return report(err, exit_numerical_error, "numerical", "-", e.what());
  }
}

}  // namespace satqkd::cli
