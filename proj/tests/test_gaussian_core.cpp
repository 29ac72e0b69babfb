#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "satqkd/errors.hpp"
#include "satqkd/gaussian_core.hpp"

using namespace satqkd;
using namespace satqkd::gaussian;

namespace {

double max_abs_diff(const TwoModeCovariance& a, const TwoModeCovariance& b) {
  return (a.full() - b.full()).cwiseAbs().maxCoeff();
}

// Smallest eigenvalue of σ + iΩ; non-negative for a physical state.
double uncertainty_margin(const TwoModeCovariance& s) {
  Eigen::Matrix4cd m = s.full().cast<std::complex<double>>();
  const std::complex<double> i(0.0, 1.0);
  m(0, 1) += i;
  m(1, 0) -= i;
  m(2, 3) += i;
  m(3, 2) -= i;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("make_tmsv") {
  SUBCASE("V = 1 is two vacua") {
    CHECK(make_tmsv(1.0).full().isApprox(Eigen::Matrix4d::Identity()));
  }
  SUBCASE("V = 2 correlation block") {
    const auto s = make_tmsv(2.0);
    CHECK(s.c_block(0, 0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(s.c_block(1, 1) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
    CHECK(s.c_block(0, 1) == 0.0);
  }
  SUBCASE("V = 2 is pure") {
    const auto sp = symplectic_spectrum(make_tmsv(2.0));
    CHECK(sp.delta_invariant == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sp.det_invariant == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sp.lambda1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sp.lambda2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(make_tmsv(0.999), DomainError);
}

TEST_CASE("apply_thermal_loss") {
  const auto tmsv = make_tmsv(2.0);
  CHECK(max_abs_diff(apply_thermal_loss(tmsv, 1.0, 0.0), tmsv) == 0.0);

  const auto half = apply_thermal_loss(tmsv, 0.5, 1.0);
  CHECK(half.b_block(0, 0) == doctest::Approx(1.5));
  CHECK(half.b_block(1, 1) == doctest::Approx(1.5));
  CHECK(half.c_block(0, 0) == doctest::Approx(std::sqrt(1.5)));

  const double chi = (1.0 - 0.5) / 0.5 + 0.01;
  CHECK(apply_thermal_loss(tmsv, 0.5, chi).b_block(0, 0) == doctest::Approx(0.5 * (2.0 + 1.01)));

  CHECK_THROWS_AS(apply_thermal_loss(tmsv, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(apply_thermal_loss(tmsv, 1.1, 0.0), DomainError);
  CHECK_THROWS_AS(apply_thermal_loss(tmsv, 0.5, -0.1), DomainError);
}

TEST_CASE("apply_overlap_beamsplitter") {
  const auto tmsv = make_tmsv(2.0);
  const auto lossy = apply_thermal_loss(tmsv, 0.7, 0.3);

  CHECK(max_abs_diff(degraded_state(2.0, 0.7, 0.3, 1.0), lossy) < 1e-14);

  const auto dark = degraded_state(2.0, 0.7, 0.3, 0.0);
  CHECK(dark.c_block.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(dark.b_block(0, 0) == doctest::Approx(0.7 * (1.0 + 0.3)));

  const auto mixed = apply_overlap_beamsplitter(tmsv, 0.5);
  CHECK(mixed.b_block(0, 0) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(mixed.b_block(1, 1) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(max_abs_diff(mixed, degraded_state_closed_form(2.0, 1.0, 0.0, 0.5)) < 1e-15);

  CHECK_THROWS_AS(apply_overlap_beamsplitter(tmsv, -0.01), DomainError);
  CHECK_THROWS_AS(apply_overlap_beamsplitter(tmsv, 1.01), DomainError);
}

TEST_CASE("beam splitter after the loss channel is a different state") {
  // Guards the channel ordering: mixing after the loss gives b = Θ²T(V+χ) + 1 − Θ².
  const double v = 3.0, t = 0.6, chi = 0.4, theta = 0.8;
  const auto wrong = apply_overlap_beamsplitter(apply_thermal_loss(make_tmsv(v), t, chi), theta);
  CHECK(wrong.b_block(0, 0) == doctest::Approx(theta * theta * t * (v + chi) + 1 - theta * theta));
  CHECK(std::abs(wrong.b_block(0, 0) - degraded_state(v, t, chi, theta).b_block(0, 0)) > 1e-3);
}

TEST_CASE("symplectic_spectrum") {
  TwoModeCovariance vacuum;
  const auto sv = symplectic_spectrum(vacuum);
  CHECK(sv.lambda1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sv.lambda2 == doctest::Approx(1.0).epsilon(1e-14));

  const auto id = symplectic_spectrum(apply_thermal_loss(make_tmsv(2.0), 1.0, 0.0));
  CHECK(id.delta_invariant == doctest::Approx(2.0));
  CHECK(id.det_invariant == doctest::Approx(1.0));
  CHECK(id.lambda2 == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("product thermal state") {
    TwoModeCovariance s;
    s.a_block *= 3.0;
    s.b_block *= 1.5;
    const auto sp = symplectic_spectrum(s);
    CHECK(sp.lambda1 == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(sp.lambda2 == doctest::Approx(1.5).epsilon(1e-13));
  }

  SUBCASE("invariants agree with the eigen route away from degeneracy") {
    const auto s = degraded_state(5.0, 0.4, 1.6, 0.9);
    const auto sp = symplectic_spectrum(s);
    const auto inv = spectrum_from_invariants(sp.delta_invariant, sp.det_invariant);
    CHECK(inv.lambda1 == doctest::Approx(sp.lambda1).epsilon(1e-12));
    CHECK(inv.lambda2 == doctest::Approx(sp.lambda2).epsilon(1e-12));
  }

  SUBCASE("significantly negative radicand is an error") {
    CHECK_THROWS_AS(spectrum_from_invariants(1.0, 1.0), NumericalError);
    const auto clamped = spectrum_from_invariants(2.0, 1.0 + 1e-12);
    CHECK(clamped.lambda1 == doctest::Approx(1.0));
  }
}

TEST_CASE("entropy_g") {
  CHECK(entropy_g(1.0) == 0.0);
  CHECK(entropy_g(1.0 - 1e-10) == 0.0);
  CHECK(entropy_g(3.0) == doctest::Approx(2.0).epsilon(1e-15));
  // (3/2) log2(3/2) + 1/2
  CHECK(entropy_g(2.0) == doctest::Approx(1.5 * std::log2(1.5) + 0.5).epsilon(1e-15));
  CHECK(entropy_g(2.0) == doctest::Approx(1.377444).epsilon(1e-6));
  CHECK_THROWS_AS(entropy_g(0.99), DomainError);
}

TEST_CASE("entropy_g slope matches the analytic derivative") {
  for (double x = 1.01; x <= 50.0; x *= 1.07) {
    const double h = 1e-5 * x;
    const double fd = (entropy_g(x + h) - entropy_g(x - h)) / (2 * h);
    const double exact = 0.5 * std::log2((x + 1) / (x - 1));
    CHECK(std::abs(fd - exact) < 1e-6);
  }
}

TEST_CASE("entropy_g is increasing") {
  double prev = entropy_g(1.0);
  for (double x = 1.0 + 1e-9; x < 1e4; x *= 1.5) {
    const double g = entropy_g(x);
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("conditional_after_homodyne") {
  // Θ = 1, T = 1, χ = 0, V = 2: r = s = 2, t = √3.
  const auto s = degraded_state_closed_form(2.0, 1.0, 0.0, 1.0);
  const auto det = conditional_after_homodyne(s);
  CHECK(det.lambda3 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(det.covariance(0, 0) == doctest::Approx(0.5));
  CHECK(det.covariance(1, 1) == doctest::Approx(2.0));

  CHECK(conditional_after_homodyne(s, Lambda3Convention::diagonal).lambda3 == doctest::Approx(2.0));

  TwoModeCovariance uncorrelated;
  uncorrelated.a_block *= 4.0;
  uncorrelated.b_block << 2.0, 0.0, 0.0, 3.0;
  const auto c = conditional_after_homodyne(uncorrelated);
  CHECK(c.covariance.isApprox(uncorrelated.b_block));
  CHECK(c.lambda3 == doctest::Approx(std::sqrt(6.0)));

  TwoModeCovariance bad;
  bad.a_block(0, 0) = 0.0;
  CHECK_THROWS_AS(conditional_after_homodyne(bad), DomainError);
}

TEST_CASE("homodyne_mutual_information") {
  CHECK(homodyne_mutual_information(degraded_state_closed_form(2.0, 1.0, 0.0, 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(homodyne_mutual_information(degraded_state_closed_form(2.0, 1.0, 0.0, 0.0)) == 0.0);
}

TEST_CASE("property: TMSV is pure for every V") {
  for (double v = 1.0; v <= 1000.0; v *= 1.25) {
    const auto sp = symplectic_spectrum(make_tmsv(v));
    CHECK(std::abs(sp.lambda1 - 1.0) < 1e-10);
    CHECK(std::abs(sp.lambda2 - 1.0) < 1e-10);
    CHECK(std::abs(make_tmsv(v).full().determinant() - 1.0) < 1e-9 * v * v);
  }
}

TEST_CASE("property: constructive state equals the closed form") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uv(1.0, 60.0), ut(1e-3, 1.0), uc(0.0, 5.0), uo(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double v = uv(rng), t = ut(rng), chi = uc(rng), theta = uo(rng);
    worst = std::max(worst, max_abs_diff(degraded_state(v, t, chi, theta),
                                         degraded_state_closed_form(v, t, chi, theta)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("property: constructor-produced states are physical") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uv(1.0, 100.0), ut(1e-4, 1.0), ue(0.0, 0.5),
      uo(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = uv(rng), t = ut(rng), theta = uo(rng);
    const double chi = (1.0 - t) / t + ue(rng);
    const auto s = degraded_state(v, t, chi, theta);
    const auto sp = symplectic_spectrum(s);
    CHECK(sp.lambda1 >= sp.lambda2);
    CHECK(sp.lambda2 >= 1.0 - 1e-9);
    CHECK(conditional_after_homodyne(s).lambda3 >= 1.0 - 1e-9);
    CHECK(uncertainty_margin(s) >= -1e-9 * v);
    CHECK(s.b_block(0, 0) >= 1.0 - 1e-9);
  }
}

TEST_CASE("property: Bob's variance grows with the transmission noise budget") {
  // With χ = (1−T)/T + ε, s = T(Θ²V + 1 − Θ²) + (1 − T) + Tε is monotone in T
  // with slope Θ²(V − 1) + ε >= 0.
  for (double theta : {0.0, 0.3, 1.0}) {
    double prev = -1.0;
    for (double t = 0.01; t <= 1.0; t += 0.01) {
      const double chi = (1.0 - t) / t + 0.01;
      const double s = degraded_state(4.0, t, chi, theta).b_block(0, 0);
      CHECK(s >= prev - 1e-15);
      prev = s;
    }
  }
}
