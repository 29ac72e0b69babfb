#include "satqkd/relativistic_channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "quadrature.hpp"
#include "satqkd/constants.hpp"
#include "satqkd/errors.hpp"

namespace satqkd::relativity {

namespace {

using constants::speed_of_light;

void require_height(double height) {
  if (!(height >= 0.0) || !std::isfinite(height)) {
    std::ostringstream os;
    os << "satellite height must be >= 0 m, got " << height;
    throw DomainError(os.str());
  }
}

void require_shift(double delta) {
  if (!(1.0 + delta > 0.0)) {
    std::ostringstream os;
    os << "frequency shift requires 1 + delta > 0, got delta = " << delta;
    throw DomainError(os.str());
  }
}

// ln(Ω_B/Ω_A), built from log1p of the small terms so that δ ~ 1e-10 keeps
// its full relative precision.
double log_frequency_ratio(const EarthModel& earth, double height) {
  require_height(height);
  const double m = earth.mass_length;
  const double a = earth.kerr_length;
  const double ra = earth.equatorial_radius;
  const double rb = ra + height;
  const double w = earth.angular_velocity / speed_of_light;  // 1/m
  const double eps = static_cast<double>(earth.orbit_direction);

  const double spin = eps * (a / rb) * std::sqrt(m / rb);
  const double orbit = -3.0 * m / rb + 2.0 * spin;  // radicand − 1
  const double ground =
      -(2.0 * m / ra) * (1.0 + 2.0 * a * w) + (ra * ra + a * a - 2.0 * m * a * a / ra) * w * w;

  if (!(1.0 + orbit > 0.0)) {
    std::ostringstream os;
    os << "no stable circular photon frequency at r_B = " << rb << " m";
    throw DomainError(os.str());
  }
  if (!(1.0 + ground > 0.0)) throw DomainError("ground observer normalization is not positive");

  return std::log1p(spin) + 0.5 * std::log1p(ground) - 0.5 * std::log1p(orbit);
}

}  // namespace

EarthModel EarthModel::from_physical(double gm, double radius, double angular_velocity,
                                     double angular_momentum, int orbit_direction) {
  if (!(gm > 0.0)) throw DomainError("GM must be positive");
  if (!(angular_momentum >= 0.0)) throw DomainError("angular momentum must be >= 0");
  EarthModel e;
  e.mass_length = gm / (speed_of_light * speed_of_light);
  e.schwarzschild_radius = 2.0 * e.mass_length;
  e.equatorial_radius = radius;
  e.angular_velocity = angular_velocity;
  const double mass_kg = gm / constants::gravitational_constant;
  e.kerr_length = angular_momentum / (mass_kg * speed_of_light);
  e.orbit_direction = orbit_direction;
  e.validate();
  return e;
}

EarthModel EarthModel::earth() {
  return from_physical(constants::earth_gm, constants::earth_radius,
                       constants::earth_angular_velocity, constants::earth_angular_momentum, +1);
}

void EarthModel::validate() const {
  if (!(mass_length > 0.0)) throw DomainError("mass length must be positive");
  if (schwarzschild_radius != 2.0 * mass_length) {
    throw DomainError("Schwarzschild radius must equal twice the mass length");
  }
  if (!(equatorial_radius > schwarzschild_radius)) {
    throw DomainError("equatorial radius must exceed the Schwarzschild radius");
  }
  if (!(kerr_length >= 0.0)) throw DomainError("Kerr length must be >= 0");
  if (!(angular_velocity >= 0.0)) throw DomainError("angular velocity must be >= 0");
  if (orbit_direction != 1 && orbit_direction != -1) {
    throw DomainError("orbit direction must be +1 or -1");
  }
}

WavePacket::WavePacket(double peak_frequency, double bandwidth)
    : peak_(peak_frequency), sigma_(bandwidth) {
  if (!(peak_frequency > 0.0) || !std::isfinite(peak_frequency)) {
    throw DomainError("peak frequency must be positive");
  }
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw DomainError("bandwidth must be positive");
  }
}

WavePacket WavePacket::narrowband(double peak_frequency, double bandwidth) {
  WavePacket p(peak_frequency, bandwidth);
  if (!p.is_narrowband()) {
    std::ostringstream os;
    os << "peak frequency / bandwidth must exceed " << min_narrowband_ratio << ", got "
       << p.ratio();
    throw DomainError(os.str());
  }
  return p;
}

double frequency_ratio_exact(const EarthModel& earth, double height) {
  return std::exp(log_frequency_ratio(earth, height));
}

FrequencyShift delta_exact(const EarthModel& earth, double height) {
  FrequencyShift out;
  out.method = DeltaMethod::exact;
  out.delta_total = std::expm1(0.5 * log_frequency_ratio(earth, height));
  return out;
}

FrequencyShift delta_perturbative(const EarthModel& earth, double height) {
  require_height(height);
  const double ra = earth.equatorial_radius;
  const double compact = earth.schwarzschild_radius / ra;
  const double w = earth.angular_velocity / speed_of_light;
  const double v = ra * w;  // equatorial speed in units of c
  const double quarter_v2 = 0.25 * v * v;

  FrequencyShift out;
  out.method = DeltaMethod::perturbative;
  out.delta_schwarzschild = 0.125 * compact * (ra - 2.0 * height) / (ra + height);
  out.delta_rotation = -quarter_v2;
  out.delta_higher = -quarter_v2 * (0.75 * compact - 4.0 * earth.mass_length * earth.kerr_length /
                                                         (w * ra * ra * ra));
  out.delta_total = *out.delta_schwarzschild + *out.delta_rotation + *out.delta_higher;
  return out;
}

FrequencyShift frequency_shift(const EarthModel& earth, double height, DeltaMethod method) {
  return method == DeltaMethod::exact ? delta_exact(earth, height)
                                      : delta_perturbative(earth, height);
}

double overlap_closed_form(double delta, const WavePacket& packet, OverlapFormula formula) {
  require_shift(delta);
  // Same operation order as the batch kernels.
  const double rr = packet.ratio() * packet.ratio();
  if (formula == OverlapFormula::printed) {
    const double q = 1.0 + (1.0 + delta) * (1.0 + delta);
    return std::sqrt(2.0 / q) / (1.0 + delta) * std::exp(-delta * delta * rr / (4.0 * q));
  }
  const double dilation = (1.0 + delta) * (1.0 + delta);
  const double shift = delta * (2.0 + delta);  // dilation − 1
  const double q = 1.0 + dilation * dilation;
  return std::sqrt(2.0 * dilation / q) * std::exp(-shift * shift * rr / (4.0 * q));
}

QuadratureResult overlap_quadrature(double delta, const WavePacket& packet) {
  require_shift(delta);
  const double ratio = packet.ratio();
  // In u = (Ω − Ω₀)/σ the received packet is centred at R(k − 1), k = (1+δ)².
  const double dilation = (1.0 + delta) * (1.0 + delta);
  const double centre_b = ratio * delta * (2.0 + delta);
  const double half_width = 40.0 * (1.0 + std::abs(delta) * ratio);

  const auto integrand = [=](double u) {
    const double w = (u - centre_b) / dilation;
    return std::exp(-0.25 * (w * w + u * u));
  };

  std::vector<double> points{-half_width, half_width};
  for (double p : {0.0, centre_b, centre_b / (1.0 + dilation * dilation)}) {
    if (p > -half_width && p < half_width) points.push_back(p);
  }

  const auto integral = detail::integrate(integrand, points, 1e-12, 4000);
  if (integral.status != 0) {
    std::ostringstream os;
    os.precision(17);
    os << "overlap quadrature did not converge (gsl status " << integral.status << ", "
       << integral.intervals << " intervals, estimate " << integral.value << " +- "
       << integral.abs_error << ") for delta=" << delta << " ratio=" << ratio;
    throw NumericalError(os.str());
  }
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * dilation);
  return {integral.value * norm, integral.abs_error * norm, integral.intervals};
}

double overlap_quadrature_oracle(double delta, const WavePacket& packet) {
  return overlap_quadrature(delta, packet).value;
}

}  // namespace satqkd::relativity
