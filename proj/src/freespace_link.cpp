#include "satqkd/freespace_link.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "quadrature.hpp"
#include "satqkd/errors.hpp"

namespace satqkd::link {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be positive, got " << v;
    throw DomainError(os.str());
  }
}

}  // namespace

void LinkGeometry::validate() const {
  if (!(height >= 0.0) || !std::isfinite(height)) throw DomainError("height must be >= 0 m");
  if (!(zenith_angle >= 0.0 && zenith_angle < 0.5 * std::numbers::pi)) {
    throw DomainError("zenith angle must lie in [0, pi/2)");
  }
  require_positive(ground_radius, "ground radius");
}

void OpticalSetup::validate() const {
  require_positive(setup_efficiency, "setup efficiency");
  if (setup_efficiency > 1.0) throw DomainError("setup efficiency must be <= 1");
  require_positive(extinction_coefficient, "extinction coefficient");
  require_positive(extinction_scale_height, "extinction scale height");
  require_positive(beam_waist, "beam waist");
  require_positive(receiver_aperture, "receiver aperture");
  require_positive(wavelength, "wavelength");
  if (!(fiber_loss_db_per_km >= 0.0)) throw DomainError("fiber loss must be >= 0 dB/km");
}

double OpticalSetup::rayleigh_range() const {
  return std::numbers::pi * beam_waist * beam_waist / wavelength;
}

double slant_distance(const LinkGeometry& geom) {
  geom.validate();
  const double h = geom.height;
  const double r = geom.ground_radius;
  const double rc = r * std::cos(geom.zenith_angle);
  // √(h² + 2hr + r²cos²θ) − r cosθ, rationalized against cancellation at small h.
  const double num = h * (h + 2.0 * r);
  if (num == 0.0) return 0.0;
  return num / (std::sqrt(num + rc * rc) + rc);
}

double atmospheric_path_integral(const LinkGeometry& geom, const OpticalSetup& setup) {
  setup.validate();
  const double z = slant_distance(geom);
  if (z == 0.0) return 0.0;
  const double r = geom.ground_radius;
  const double c = std::cos(geom.zenith_angle);
  const double scale = setup.extinction_scale_height;

  const auto density = [=](double xi) {
    // altitude √(r² + ξ² + 2rξ cosθ) − r, rationalized
    const double num = xi * (xi + 2.0 * r * c);
    const double alt = num / (std::sqrt(r * r + num) + r);
    return std::exp(-alt / scale);
  };

  // Breakpoints on a geometric ladder of scale heights resolve the boundary
  // layer near the ground even for paths ~10^4 scale heights long.
  std::vector<double> points{0.0};
  for (double p = 0.25 * scale; p < z; p *= 4.0) points.push_back(p);
  points.push_back(z);

  const auto integral = detail::integrate(density, points, 1e-10, 4000);
  if (integral.status != 0) {
    std::ostringstream os;
    os.precision(17);
    os << "atmospheric path integral did not converge (gsl status " << integral.status << ", "
       << integral.intervals << " intervals) for h=" << geom.height
       << " theta=" << geom.zenith_angle;
    throw NumericalError(os.str());
  }
  return integral.value;
}

double atmospheric_transmissivity(const LinkGeometry& geom, const OpticalSetup& setup) {
  return std::exp(-setup.extinction_coefficient * atmospheric_path_integral(geom, setup));
}

double spot_size(double distance, const OpticalSetup& setup) {
  const double x = distance / setup.rayleigh_range();
  return setup.beam_waist * std::sqrt(1.0 + x * x);
}

double diffraction_transmissivity(const LinkGeometry& geom, const OpticalSetup& setup) {
  setup.validate();
  const double w = spot_size(slant_distance(geom), setup);
  const double a = setup.receiver_aperture;
  return -std::expm1(-2.0 * a * a / (w * w));
}

double total_transmissivity(const LinkGeometry& geom, const OpticalSetup& setup) {
  return setup.setup_efficiency * atmospheric_transmissivity(geom, setup) *
         diffraction_transmissivity(geom, setup);
}

LinkBudget link_budget(const LinkGeometry& geom, const OpticalSetup& setup, LossModel model) {
  setup.validate();
  LinkBudget b;
  b.slant_distance = slant_distance(geom);
  if (model == LossModel::fiber_equivalent) {
    b.atmospheric = 1.0;
    b.diffraction = 1.0;
    b.loss_db = setup.fiber_loss_db_per_km * b.slant_distance / 1000.0;
    b.total = db_to_transmissivity(b.loss_db);
    return b;
  }
  b.atmospheric = atmospheric_transmissivity(geom, setup);
  b.diffraction = diffraction_transmissivity(geom, setup);
  b.total = setup.setup_efficiency * b.atmospheric * b.diffraction;
  b.loss_db = transmissivity_to_db(b.total);
  return b;
}

double transmissivity_to_db(double transmissivity) {
  if (!(transmissivity > 0.0 && transmissivity <= 1.0)) {
    std::ostringstream os;
    os << "transmissivity must lie in (0, 1], got " << transmissivity;
    throw DomainError(os.str());
  }
  return 0.0 - 10.0 * std::log10(transmissivity);  // +0 dB at T = 1
}

double db_to_transmissivity(double loss_db) {
  if (!(loss_db >= 0.0)) {
    std::ostringstream os;
    os << "loss must be >= 0 dB, got " << loss_db;
    throw DomainError(os.str());
  }
  return std::pow(10.0, -loss_db / 10.0);
}

}  // namespace satqkd::link
