#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satqkd/conventions.hpp"
#include "satqkd/freespace_link.hpp"
#include "satqkd/kernels.hpp"
#include "satqkd/keyrate_engine.hpp"
#include "satqkd/relativistic_channel.hpp"

namespace satqkd::keyrate {

// Everything needed to evaluate one point of the δ → Θ → T → K chain.
struct Scenario {
  relativity::EarthModel earth = relativity::EarthModel::earth();
  double peak_frequency = constants::default_peak_frequency;  // Ω₀, Hz
  double bandwidth = constants::default_bandwidth;            // σ, Hz
  link::OpticalSetup setup;
  ProtocolParams protocol;
  double height = 0.0;        // m
  double zenith_angle = 0.0;  // rad
  DeltaMethod delta_method = DeltaMethod::perturbative;
  OverlapFormula overlap_formula = OverlapFormula::derived;
  LossModel loss_model = LossModel::freespace;
  // Bypass the relativistic stage (overlap wins over delta when both are set).
  std::optional<double> forced_delta;
  std::optional<double> forced_overlap;
};

enum class SweepParameter { height, bandwidth, variance, excess_noise, zenith_angle };

std::string_view to_string(SweepParameter p);
std::optional<SweepParameter> parse_sweep_parameter(std::string_view s);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::height;
  std::vector<double> grid;  // nonempty, strictly monotone
  SweepMode mode = SweepMode::gravity_only;
  Scenario fixed;
  unsigned threads = 1;
  kernels::Isa isa = kernels::best_isa();
};

struct SweepRow {
  double grid_value = 0.0;
  double height = 0.0;
  double zenith_angle = 0.0;
  std::optional<relativity::FrequencyShift> shift;  // absent when Θ was forced
  double overlap = 1.0;
  double transmissivity = 1.0;
  double loss_db = 0.0;
  KeyRateResult result;
  double reference_key_rate = 0.0;  // same point with Θ = 1
  std::optional<double> mu;         // absent when the reference rate is <= 0
  std::string error;                // nonempty for a failed point

  bool ok() const { return error.empty(); }
};

// Height grid linspace or logspace helpers for sweeps.
std::vector<double> linear_grid(double start, double stop, std::size_t points);
std::vector<double> log_grid(double start, double stop, std::size_t points);

// Evaluates every grid point. gravity_only holds T at fixed.protocol.transmissivity;
// full_link takes T from the link budget at (h, θ). Rows follow grid order and
// are bitwise independent of the thread count. Per-point failures are recorded
// in SweepRow::error; an invalid spec throws DomainError.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

}  // namespace satqkd::keyrate
