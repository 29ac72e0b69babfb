#pragma once

#include <cstddef>
#include <optional>

#include "satqkd/conventions.hpp"

// Earth-to-satellite frequency shift on the equatorial plane of the Kerr
// metric, and the overlap of the sent and received Gaussian wave packets.
//
// Internally all masses and the Kerr parameter are geometrized to meters
// (GM/c², J/(Mc)) and angular velocities to inverse meters (ω/c), so every
// ratio below is dimensionless.
namespace satqkd::relativity {

struct EarthModel {
  double mass_length = 0.0;           // GM/c², m
  double schwarzschild_radius = 0.0;  // 2GM/c², m
  double equatorial_radius = 0.0;     // r_A, m
  double angular_velocity = 0.0;      // ω, rad/s
  double kerr_length = 0.0;           // a = J/(Mc), m
  int orbit_direction = +1;           // +1 co-rotating, -1 counter-rotating

  // Geometrizes SI inputs; throws DomainError on r_A <= r_S, a < 0, etc.
  static EarthModel from_physical(double gm, double radius, double angular_velocity,
                                  double angular_momentum, int orbit_direction = +1);
  static EarthModel earth();

  void validate() const;
};

struct FrequencyShift {
  double delta_total = 0.0;
  // Present only for the perturbative method.
  std::optional<double> delta_schwarzschild;
  std::optional<double> delta_rotation;
  std::optional<double> delta_higher;
  DeltaMethod method = DeltaMethod::perturbative;
};

// Real normalized Gaussian packet F(Ω) = (2πσ²)^(-1/4) exp(−(Ω−Ω₀)²/(4σ²)).
// Ω₀ and σ are linear frequencies in Hz; only Ω₀/σ enters the overlap.
class WavePacket {
 public:
  // Narrow-band regime in which the overlap integral may be extended over the
  // whole real axis.
  static constexpr double min_narrowband_ratio = 1e3;

  WavePacket(double peak_frequency, double bandwidth);
  // Additionally enforces Ω₀/σ > min_narrowband_ratio.
  static WavePacket narrowband(double peak_frequency, double bandwidth);

  double peak_frequency() const noexcept { return peak_; }
  double bandwidth() const noexcept { return sigma_; }
  double ratio() const noexcept { return peak_ / sigma_; }
  bool is_narrowband() const noexcept { return ratio() > min_narrowband_ratio; }

 private:
  double peak_;
  double sigma_;
};

// Ω_B/Ω_A for a satellite on a circular equatorial orbit at height h above
// an observer co-rotating on the equator.
double frequency_ratio_exact(const EarthModel& earth, double height);

// δ = √(Ω_B/Ω_A) − 1 from the exact ratio (not decomposed).
FrequencyShift delta_exact(const EarthModel& earth, double height);

// Second-order expansion δ = δ_Sch + δ_rot + δ_h.
FrequencyShift delta_perturbative(const EarthModel& earth, double height);

FrequencyShift frequency_shift(const EarthModel& earth, double height, DeltaMethod method);

// Closed-form overlap Θ(δ). Throws DomainError for 1 + δ <= 0.
double overlap_closed_form(double delta, const WavePacket& packet,
                           OverlapFormula formula = OverlapFormula::derived);

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
};

// ∫ F_B(Ω) F_A(Ω) dΩ with F_B(Ω) = (1+δ)⁻¹ F_A(Ω/(1+δ)²), integrated
// adaptively (relative tolerance 1e-12) over Ω₀ ± 40σ(1 + |δ|Ω₀/σ).
// Throws NumericalError if the quadrature does not converge.
QuadratureResult overlap_quadrature(double delta, const WavePacket& packet);
double overlap_quadrature_oracle(double delta, const WavePacket& packet);

}  // namespace satqkd::relativity
