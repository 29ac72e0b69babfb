#include <doctest.h>

#include <cmath>
#include <numbers>

#include "satqkd/errors.hpp"
#include "satqkd/freespace_link.hpp"

using namespace satqkd;
using namespace satqkd::link;

namespace {

const OpticalSetup defaults;

// Distance from the ground station to a point at height h seen at zenith
// angle θ, by bisection on the law of cosines in the Earth-centred triangle.
double slant_by_bisection(double h, double theta, double ra) {
  const double rb = ra + h;
  double lo = 0.0, hi = 2.0 * rb + ra;
  for (int i = 0; i < 400; ++i) {
    const double z = 0.5 * (lo + hi);
    const double r2 = ra * ra + z * z + 2.0 * ra * z * std::cos(theta);
    (r2 < rb * rb ? lo : hi) = z;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("slant_distance") {
  CHECK(slant_distance({5e5, 0.0}) == doctest::Approx(5e5).epsilon(1e-15));
  CHECK(slant_distance({0.0, 0.7}) == 0.0);
  const double theta = std::numbers::pi / 3.0;
  CHECK(slant_distance({5e5, theta}) ==
        doctest::Approx(slant_by_bisection(5e5, theta, 6.371e6)).epsilon(1e-13));
  CHECK(slant_distance({1.0, 1.5}) == doctest::Approx(slant_by_bisection(1.0, 1.5, 6.371e6)).epsilon(1e-9));
  CHECK_THROWS_AS(slant_distance({-1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(slant_distance({1.0, std::numbers::pi / 2.0}), DomainError);
}

TEST_CASE("atmospheric_transmissivity") {
  CHECK(atmospheric_transmissivity({0.0, 0.3}, defaults) == 1.0);

  const double far = atmospheric_path_integral({1e9, 0.0}, defaults);
  CHECK(far == doctest::Approx(6600.0).epsilon(1e-9));
  CHECK(atmospheric_transmissivity({1e9, 0.0}, defaults) ==
        doctest::Approx(std::exp(-5e-6 * 6600.0)).epsilon(1e-9));
  CHECK(atmospheric_transmissivity({1e9, 0.0}, defaults) == doctest::Approx(0.967).epsilon(1e-3));

  for (double h : {10.0, 1e3, 6600.0, 2e4, 1e5, 3.5786e7}) {
    const double closed = 6600.0 * -std::expm1(-h / 6600.0);
    CHECK(std::abs(atmospheric_path_integral({h, 0.0}, defaults) - closed) <= 1e-9 * closed);
  }

  // A slanted path crosses more air than the vertical one.
  CHECK(atmospheric_path_integral({1e6, 1.0}, defaults) >
        atmospheric_path_integral({1e6, 0.0}, defaults));
}

TEST_CASE("diffraction_transmissivity") {
  CHECK(diffraction_transmissivity({0.0, 0.0}, defaults) ==
        doctest::Approx(1.0 - std::exp(-8.0)).epsilon(1e-15));
  CHECK(diffraction_transmissivity({0.0, 0.0}, defaults) == doctest::Approx(0.99966).epsilon(1e-5));

  const double zr = defaults.rayleigh_range();
  CHECK(zr == doctest::Approx(std::numbers::pi * 0.04 / defaults.wavelength));
  CHECK(spot_size(zr, defaults) == doctest::Approx(0.2 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(diffraction_transmissivity({zr, 0.0}, defaults) ==
        doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-14));
  CHECK(diffraction_transmissivity({1e15, 0.0}, defaults) < 1e-12);
}

TEST_CASE("total_transmissivity") {
  CHECK(total_transmissivity({0.0, 0.0}, defaults) ==
        doctest::Approx(0.4 * (1.0 - std::exp(-8.0))).epsilon(1e-15));
  const LinkGeometry g{5e5, 0.0};
  CHECK(total_transmissivity(g, defaults) ==
        doctest::Approx(0.4 * atmospheric_transmissivity(g, defaults) *
                        diffraction_transmissivity(g, defaults))
            .epsilon(1e-15));
  for (double h : {1.0, 1e3, 1e6, 3.5e7}) {
    CHECK(total_transmissivity({h, 0.4}, defaults) <= defaults.setup_efficiency);
  }
}

TEST_CASE("dB conversions") {
  CHECK(transmissivity_to_db(1.0) == 0.0);
  CHECK_FALSE(std::signbit(transmissivity_to_db(1.0)));
  CHECK(db_to_transmissivity(10.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(db_to_transmissivity(0.2 * 50.0) == doctest::Approx(0.1).epsilon(1e-15));
  for (double t : {1e-9, 0.01, 0.3, 0.999}) {
    CHECK(db_to_transmissivity(transmissivity_to_db(t)) == doctest::Approx(t).epsilon(1e-12));
  }
  CHECK_THROWS_AS(transmissivity_to_db(0.0), DomainError);
  CHECK_THROWS_AS(db_to_transmissivity(-1.0), DomainError);
}

TEST_CASE("link_budget loss models") {
  const LinkGeometry g{5e4, 0.0};
  const auto fiber = link_budget(g, defaults, LossModel::fiber_equivalent);
  CHECK(fiber.loss_db == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(fiber.total == doctest::Approx(0.1).epsilon(1e-14));

  const auto free = link_budget(g, defaults, LossModel::freespace);
  CHECK(free.total == doctest::Approx(total_transmissivity(g, defaults)).epsilon(1e-15));
  CHECK(free.loss_db == doctest::Approx(transmissivity_to_db(free.total)).epsilon(1e-15));

  // Fiber-equivalent loss over GEO is finite in dB while T underflows.
  const auto geo = link_budget({3.5786e7, 0.0}, defaults, LossModel::fiber_equivalent);
  CHECK(geo.loss_db == doctest::Approx(7157.2).epsilon(1e-12));
  CHECK(geo.total == 0.0);
}

TEST_CASE("property: transmissivity decreases with height and zenith angle") {
  double prev = 1.0;
  for (double h = 1.0; h < 4e7; h *= 1.3) {
    const double t = total_transmissivity({h, 0.2}, defaults);
    CHECK(t < prev);
    prev = t;
  }
  for (double h : {1e3, 5e5, 3.5e7}) {
    double prev_t = 1.0;
    for (double theta = 0.0; theta < 1.5; theta += 0.05) {
      const double t = total_transmissivity({h, theta}, defaults);
      CHECK(t < prev_t);
      prev_t = t;
    }
  }
}

TEST_CASE("loss in dB against log-height is convex at large heights") {
  // Far field: l ≈ const + 20 log10(h), so slope in log h approaches 20 dB/decade
  // from below and the curve bends upward.
  double prev_slope = 0.0;
  for (double h = 1e5; h < 4e7; h *= 2.0) {
    const double l1 = transmissivity_to_db(total_transmissivity({h, 0.0}, defaults));
    const double l2 = transmissivity_to_db(total_transmissivity({2.0 * h, 0.0}, defaults));
    const double slope = (l2 - l1) / std::log10(2.0);
    CHECK(slope > 0.0);
    CHECK(slope <= 20.0 + 1e-9);
    CHECK(slope >= prev_slope - 1e-9);
    prev_slope = slope;
  }
}
