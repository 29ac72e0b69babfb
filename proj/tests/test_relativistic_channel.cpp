#include <doctest.h>

#include <cmath>
#include <vector>

#include "satqkd/constants.hpp"
#include "satqkd/errors.hpp"
#include "satqkd/relativistic_channel.hpp"

using namespace satqkd;
using namespace satqkd::relativity;

namespace {

const EarthModel earth = EarthModel::earth();
const WavePacket default_packet(5e14, 1e6);

EarthModel static_earth() {
  return EarthModel::from_physical(constants::earth_gm, constants::earth_radius, 0.0, 0.0);
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("EarthModel geometrization") {
  const double c = constants::speed_of_light;
  CHECK(earth.mass_length == doctest::Approx(constants::earth_gm / (c * c)).epsilon(1e-15));
  CHECK(earth.mass_length == doctest::Approx(4.435e-3).epsilon(1e-3));
  CHECK(earth.schwarzschild_radius == 2.0 * earth.mass_length);
  CHECK(earth.schwarzschild_radius == doctest::Approx(8.870e-3).epsilon(1e-3));
  // a = J / (M c) with M = GM / G
  const double mass = constants::earth_gm / constants::gravitational_constant;
  CHECK(earth.kerr_length == doctest::Approx(7.07e33 / (mass * c)).epsilon(1e-14));
  CHECK(earth.kerr_length == doctest::Approx(3.95).epsilon(2e-3));

  CHECK_THROWS_AS(EarthModel::from_physical(-1.0, 6e6, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(EarthModel::from_physical(constants::earth_gm, 1e-3, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(EarthModel::from_physical(constants::earth_gm, 6e6, 0.0, -1.0), DomainError);
  CHECK_THROWS_AS(EarthModel::from_physical(constants::earth_gm, 6e6, 0.0, 0.0, 0), DomainError);
}

TEST_CASE("WavePacket") {
  CHECK(default_packet.ratio() == 5e8);
  CHECK(default_packet.is_narrowband());
  CHECK_THROWS_AS(WavePacket::narrowband(100.0, 10.0), DomainError);
  CHECK_NOTHROW(WavePacket::narrowband(5e14, 1e6));
  CHECK_THROWS_AS(WavePacket(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(WavePacket(1.0, -1.0), DomainError);
}

TEST_CASE("delta_perturbative components") {
  const auto ground = delta_perturbative(earth, 0.0);
  CHECK(ground.method == DeltaMethod::perturbative);
  CHECK(*ground.delta_schwarzschild ==
        doctest::Approx(earth.schwarzschild_radius / earth.equatorial_radius / 8.0).epsilon(1e-15));
  CHECK(*ground.delta_schwarzschild == doctest::Approx(1.74e-10).epsilon(2e-3));

  const double v = 6.371e6 * 7.292e-5 / constants::speed_of_light;
  CHECK(*ground.delta_rotation == doctest::Approx(-v * v / 4.0).epsilon(1e-14));
  // Hand value of the rotation term quoted to three figures.
  CHECK(*ground.delta_rotation == doctest::Approx(-5.99e-13).epsilon(5e-3));

  CHECK(ground.delta_total ==
        *ground.delta_schwarzschild + *ground.delta_rotation + *ground.delta_higher);
  CHECK(std::abs(*ground.delta_higher) < 1e-20);

  const auto half = delta_perturbative(earth, earth.equatorial_radius / 2.0);
  CHECK(*half.delta_schwarzschild == 0.0);

  CHECK_THROWS_AS(delta_perturbative(earth, -1.0), DomainError);
}

TEST_CASE("delta_perturbative has one root near r_A / 2") {
  const double ra = earth.equatorial_radius;
  int sign_changes = 0;
  double prev = delta_perturbative(earth, 1.0).delta_total;
  for (int i = 1; i <= 10000; ++i) {
    const double d = delta_perturbative(earth, ra * i / 10000.0 - 1.0).delta_total;
    if ((d > 0) != (prev > 0)) ++sign_changes;
    prev = d;
  }
  CHECK(sign_changes == 1);

  double lo = 0.0, hi = ra;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (delta_perturbative(earth, mid).delta_total > 0 ? lo : hi) = mid;
  }
  CHECK(std::abs(lo - ra / 2.0) < 50e3);
}

TEST_CASE("frequency_ratio_exact limits") {
  const EarthModel s = static_earth();
  const double x = s.schwarzschild_radius / s.equatorial_radius;

  SUBCASE("observer and emitter at the same radius") {
    const double expected = std::sqrt(1.0 - x) / std::sqrt(1.0 - 1.5 * x);
    CHECK(frequency_ratio_exact(s, 0.0) == doctest::Approx(expected).epsilon(1e-15));
  }
  SUBCASE("far satellite of a static Earth tends to the ground redshift factor") {
    // Only the ground normalization survives as r_B → ∞.
    CHECK(frequency_ratio_exact(s, 1e20) == doctest::Approx(std::sqrt(1.0 - x)).epsilon(1e-15));
    CHECK(frequency_ratio_exact(s, 1e20) < 1.0);
  }
  SUBCASE("Earth at h = 0 is not unity") {
    const double ratio = frequency_ratio_exact(earth, 0.0);
    CHECK(ratio != 1.0);
    CHECK(ratio - 1.0 == doctest::Approx(3.4686302207886497e-10).epsilon(1e-6));
  }
}

TEST_CASE("delta_exact") {
  for (double h : {0.0, 1e5, 3.2e6, 3.5786e7}) {
    const auto d = delta_exact(earth, h);
    CHECK(d.method == DeltaMethod::exact);
    CHECK_FALSE(d.delta_schwarzschild.has_value());
    const double one_plus = 1.0 + d.delta_total;
    CHECK(one_plus * one_plus == doctest::Approx(frequency_ratio_exact(earth, h)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(delta_exact(earth, -5.0), DomainError);
}

TEST_CASE("delta_exact against the expansion up to GEO") {
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double h = constants::geostationary_height * i / 4000.0;
    worst = std::max(worst,
                     std::abs(delta_exact(earth, h).delta_total -
                              delta_perturbative(earth, h).delta_total));
  }
  const double scale = *delta_perturbative(earth, 0.0).delta_schwarzschild;
  CHECK(worst <= 0.01 * scale);
  // Regression value of the maximum discrepancy.
  CHECK(worst == doctest::Approx(1.2008e-12).epsilon(1e-3));
}

TEST_CASE("overlap_closed_form") {
  for (auto f : {OverlapFormula::derived, OverlapFormula::printed}) {
    CHECK(overlap_closed_form(0.0, default_packet, f) == 1.0);
  }

  const double d = -3e-10;
  const double x = d * default_packet.ratio();
  SUBCASE("second-order behaviour") {
    CHECK(std::abs(overlap_closed_form(d, default_packet, OverlapFormula::printed) -
                   (1.0 - x * x / 8.0)) < 1e-5);
    CHECK(1.0 - overlap_closed_form(d, default_packet, OverlapFormula::printed) ==
          doctest::Approx(2.8e-3).epsilon(0.01));
    CHECK(std::abs(overlap_closed_form(d, default_packet, OverlapFormula::derived) -
                   (1.0 - x * x / 2.0)) < 1e-4);
  }

  SUBCASE("prefactor is not symmetric in delta") {
    const WavePacket desk(100.0, 10.0);
    CHECK(overlap_closed_form(0.1, desk) != overlap_closed_form(-0.1, desk));
  }

  CHECK_THROWS_AS(overlap_closed_form(-1.0, default_packet), DomainError);
}

TEST_CASE("property: overlap lies in (0, 1] and equals 1 only at zero shift") {
  const WavePacket desk(100.0, 10.0);
  for (double d = -0.5; d <= 0.5; d += 0.01) {
    const double t = overlap_closed_form(d, desk);
    CHECK(t > 0.0);
    CHECK(t <= 1.0);
    if (std::abs(d) > 1e-12) CHECK(t < 1.0);
  }
}

TEST_CASE("overlap_quadrature") {
  CHECK(std::abs(overlap_quadrature_oracle(0.0, default_packet) - 1.0) < 1e-12);

  const double q = overlap_quadrature_oracle(1e-9, default_packet);
  CHECK(relative(overlap_closed_form(1e-9, default_packet), q) < 1e-9);
  // The other closed form is a measurably different function.
  CHECK(relative(overlap_closed_form(1e-9, default_packet, OverlapFormula::printed), q) > 1e-2);

  const WavePacket desk(100.0, 10.0);
  const auto res = overlap_quadrature(0.1, desk);
  CHECK(std::abs(overlap_closed_form(0.1, desk) - res.value) < 1e-6);
  CHECK(res.value == doctest::Approx(0.63352579115792).epsilon(1e-12));
  CHECK(res.intervals > 0);
  CHECK(res.abs_error < 1e-10);

  CHECK_THROWS_AS(overlap_quadrature(-2.0, desk), DomainError);
}

TEST_CASE("property: closed form matches quadrature on a coarse grid") {
  for (double ratio : {10.0, 1e3, 1e6, 5e8}) {
    const WavePacket p(ratio, 1.0);
    for (double x : {-3.0, -0.5, -1e-3, 2e-2, 1.0, 4.0}) {
      const double d = x / ratio;
      CHECK(relative(overlap_closed_form(d, p), overlap_quadrature_oracle(d, p)) < 1e-9);
    }
  }
}
