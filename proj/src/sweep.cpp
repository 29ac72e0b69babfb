#include "satqkd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <sstream>
#include <thread>

#include "satqkd/errors.hpp"

namespace satqkd::keyrate {

namespace {

// Per-point physics ahead of the batch kernels.
struct Stage {
  double delta = 0.0;
  double ratio = 1.0;
  bool has_forced_overlap = false;
};

Scenario apply_grid_value(const Scenario& base, SweepParameter p, double value) {
  Scenario s = base;
  switch (p) {
    case SweepParameter::height: s.height = value; break;
    case SweepParameter::bandwidth: s.bandwidth = value; break;
    case SweepParameter::variance: s.protocol.variance = value; break;
    case SweepParameter::excess_noise: s.protocol.excess_noise = value; break;
    case SweepParameter::zenith_angle: s.zenith_angle = value; break;
  }
  return s;
}

Stage prepare(const Scenario& sc, SweepMode mode, SweepRow& row) {
  row.height = sc.height;
  row.zenith_angle = sc.zenith_angle;
  Stage st;

  if (mode == SweepMode::full_link) {
    const link::LinkGeometry geom{sc.height, sc.zenith_angle, sc.earth.equatorial_radius};
    const link::LinkBudget budget = link::link_budget(geom, sc.setup, sc.loss_model);
    row.loss_db = budget.loss_db;
    row.transmissivity = budget.total;
    if (!(budget.total > 0.0)) {
      std::ostringstream os;
      os << "transmissivity underflows to 0 (loss " << budget.loss_db << " dB)";
      throw DomainError(os.str());
    }
  } else {
    row.transmissivity = sc.protocol.transmissivity;
    row.loss_db = link::transmissivity_to_db(row.transmissivity);
  }

  ProtocolParams p = sc.protocol;
  p.transmissivity = row.transmissivity;
  if (sc.forced_overlap) p.overlap = *sc.forced_overlap;
  p.validate();

  if (sc.forced_overlap) {
    st.has_forced_overlap = true;
    row.overlap = *sc.forced_overlap;
    return st;
  }
  const auto packet = relativity::WavePacket::narrowband(sc.peak_frequency, sc.bandwidth);
  st.ratio = packet.ratio();
  if (sc.forced_delta) {
    relativity::FrequencyShift shift;
    shift.delta_total = *sc.forced_delta;
    row.shift = shift;
  } else {
    row.shift = relativity::frequency_shift(sc.earth, sc.height, sc.delta_method);
  }
  st.delta = row.shift->delta_total;
  if (!(1.0 + st.delta > 0.0)) throw DomainError("frequency shift requires 1 + delta > 0");
  return st;
}

std::string status_message(std::uint8_t st) {
  using namespace kernels::status;
  if (st & bad_conditional_variance) return "unphysical correlation, r - t^2/s <= 0";
  if (st & bad_radicand) return "negative spectral radicand";
  if (st & eigenvalue_below_one) return "symplectic eigenvalue below 1";
  if (st & lambda3_below_one) return "conditional eigenvalue below 1";
  return {};
}

void run_chunk(const SweepSpec& spec, std::size_t begin, std::size_t end,
               std::vector<SweepRow>& rows) {
  const std::size_t n = end - begin;
  std::vector<double> delta(n, 0.0), ratio(n, 1.0), theta(n, 1.0);
  std::vector<double> variance(n, 2.0), trans(n, 1.0), noise(n, 0.0);
  std::vector<char> forced(n, 0), live(n, 0);

  for (std::size_t k = 0; k < n; ++k) {
    SweepRow& row = rows[begin + k];
    row.grid_value = spec.grid[begin + k];
    const Scenario sc = apply_grid_value(spec.fixed, spec.parameter, row.grid_value);
    try {
      const Stage st = prepare(sc, spec.mode, row);
      delta[k] = st.delta;
      ratio[k] = st.ratio;
      forced[k] = st.has_forced_overlap;
      variance[k] = sc.protocol.variance;
      trans[k] = row.transmissivity;
      noise[k] = sc.protocol.excess_noise;
      live[k] = 1;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }

  kernels::overlap_batch(spec.isa, spec.fixed.overlap_formula, delta, ratio, theta);
  for (std::size_t k = 0; k < n; ++k) {
    SweepRow& row = rows[begin + k];
    if (!live[k]) {
      theta[k] = 1.0;
      continue;
    }
    if (forced[k]) {
      theta[k] = row.overlap;
    } else {
      row.overlap = theta[k];
    }
  }

  const kernels::KeyRateConventions conv{spec.fixed.protocol.noise, spec.fixed.protocol.lambda3};
  const auto evaluate = [&](std::span<const double> ov, std::vector<KeyRateResult>& res,
                            std::vector<std::uint8_t>& status) {
    std::vector<double> r(n), s(n), t(n), l1(n), l2(n), l3(n), info(n), hol(n), key(n);
    kernels::key_rate_batch(spec.isa, conv, {variance, trans, noise, ov},
                            {r, s, t, l1, l2, l3, info, hol, key, status});
    for (std::size_t k = 0; k < n; ++k) {
      res[k] = {r[k], s[k], t[k], l1[k], l2[k], l3[k], info[k], hol[k], key[k],
                std::max(key[k], 0.0)};
    }
  };

  std::vector<KeyRateResult> main(n), ref(n);
  std::vector<std::uint8_t> main_status(n), ref_status(n);
  evaluate(theta, main, main_status);
  const std::vector<double> ones(n, 1.0);
  evaluate(ones, ref, ref_status);

  for (std::size_t k = 0; k < n; ++k) {
    if (!live[k]) continue;
    SweepRow& row = rows[begin + k];
    if (main_status[k] != kernels::status::ok) {
      row.error = status_message(main_status[k]);
      continue;
    }
    row.result = main[k];
    if (ref_status[k] == kernels::status::ok) {
      row.reference_key_rate = ref[k].key_rate;
      if (ref[k].key_rate > 0.0) row.mu = change_rate_mu(main[k].key_rate, ref[k].key_rate);
    }
  }
}

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("sweep grid must not be empty");
  for (double v : grid) {
    if (!std::isfinite(v)) throw DomainError("sweep grid values must be finite");
  }
  if (grid.size() < 2) return;
  const bool up = grid[1] > grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (up ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1])) {
      throw DomainError("sweep grid must be strictly monotone");
    }
  }
}

}  // namespace

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::height: return "height";
    case SweepParameter::bandwidth: return "bandwidth";
    case SweepParameter::variance: return "variance";
    case SweepParameter::excess_noise: return "excess_noise";
    case SweepParameter::zenith_angle: return "zenith_angle";
  }
  return "height";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view s) {
  for (auto p : {SweepParameter::height, SweepParameter::bandwidth, SweepParameter::variance,
                 SweepParameter::excess_noise, SweepParameter::zenith_angle}) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

std::vector<double> linear_grid(double start, double stop, std::size_t points) {
  if (points == 0) throw DomainError("grid needs at least one point");
  if (points == 1) return {start};
  std::vector<double> g(points);
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = start + step * static_cast<double>(i);
  g.back() = stop;
  return g;
}

std::vector<double> log_grid(double start, double stop, std::size_t points) {
  if (!(start > 0.0 && stop > 0.0)) throw DomainError("log grid bounds must be positive");
  std::vector<double> g = linear_grid(std::log(start), std::log(stop), points);
  for (double& v : g) v = std::exp(v);
  g.front() = start;
  if (points > 1) g.back() = stop;
  return g;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate_grid(spec.grid);
  if (!kernels::isa_available(spec.isa)) throw DomainError("requested kernel ISA unavailable");
  spec.fixed.earth.validate();

  const std::size_t n = spec.grid.size();
  std::vector<SweepRow> rows(n);
  const std::size_t workers =
      std::clamp<std::size_t>(spec.threads == 0 ? 1 : spec.threads, 1, n);
  if (workers == 1) {
    run_chunk(spec, 0, n, rows);
    return rows;
  }

  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      try {
        run_chunk(spec, begin, end, rows);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

}  // namespace satqkd::keyrate
