// Scalar reference kernels. These define the arithmetic the SIMD variants
// must reproduce; keep them plain.
#include <algorithm>
#include <cmath>
#include <limits>

#include "impl.hpp"
#include "satqkd/constants.hpp"

namespace satqkd::kernels::detail::scalar {

namespace {

constexpr double kTol = constants::physical_tolerance;

double g(double x) {
  if (x <= 1.0 + constants::entropy_limit_window) return 0.0;
  const double up = 0.5 * (x + 1.0);
  const double down = 0.5 * (x - 1.0);
  return up * std::log2(up) - down * std::log2(down);
}

}  // namespace

void key_rate(KeyRateConventions c, const KeyRatePointers& p, std::size_t n) {
  const bool chi = c.noise == NoiseConvention::chi;
  const bool det = c.lambda3 == Lambda3Convention::det;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = p.variance[i];
    const double tr = p.transmissivity[i];
    const double o2 = p.overlap[i] * p.overlap[i];
    const double noise = chi ? (1.0 - tr) / tr + p.excess_noise[i] : p.excess_noise[i];
    std::uint8_t st = status::ok;

    const double r = v;
    const double s = tr * ((o2 * v + 1.0 - o2) + noise);
    const double corr = tr * (v * v - 1.0);
    const double t = p.overlap[i] * std::sqrt(corr);
    const double t2 = o2 * corr;

    const double cond = r - t2 / s;
    if (!(s > 0.0) || !(cond > 0.0)) st |= status::bad_conditional_variance;
    const double info = 0.5 * std::log2(r / cond);

    // Δ − 2D = (r − s)², Δ + 2D = (r + s)² − 4t².
    const double diff = std::abs(r - s);
    double plus = (r + s) * (r + s) - 4.0 * t2;
    const double delta_inv = r * r + s * s - 2.0 * t2;
    if (plus < 0.0) {
      if (plus < -kTol * std::max(1.0, delta_inv)) st |= status::bad_radicand;
      plus = 0.0;
    }
    const double sum = std::sqrt(plus);
    double l1 = 0.5 * (sum + diff);
    double l2 = 0.5 * (sum - diff);
    if (l2 < 1.0 - kTol) st |= status::eigenvalue_below_one;
    l1 = std::max(l1, 1.0);
    l2 = std::max(l2, 1.0);

    double l3;
    if (det) {
      const double sq = s * (s - t2 / r);
      l3 = std::sqrt(std::max(sq, 0.0));
      if (sq < 0.0) st |= status::lambda3_below_one;
    } else {
      l3 = s;
    }
    if (l3 < 1.0 - kTol) st |= status::lambda3_below_one;
    l3 = std::max(l3, 1.0);

    const double holevo = g(l1) + g(l2) - g(l3);

    p.r[i] = r;
    p.s[i] = s;
    p.t[i] = t;
    p.lambda1[i] = l1;
    p.lambda2[i] = l2;
    p.lambda3[i] = l3;
    p.mutual_information[i] = info;
    p.holevo[i] = holevo;
    p.key_rate[i] = info - holevo;
    p.status[i] = st;
  }
}

void overlap(OverlapFormula f, const double* delta, const double* ratio, double* theta,
             std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = delta[i];
    const double rr = ratio[i] * ratio[i];
    if (f == OverlapFormula::printed) {
      const double q = 1.0 + (1.0 + d) * (1.0 + d);
      theta[i] = std::sqrt(2.0 / q) / (1.0 + d) * std::exp(-d * d * rr / (4.0 * q));
    } else {
      const double k = (1.0 + d) * (1.0 + d);
      const double shift = d * (2.0 + d);
      const double q = 1.0 + k * k;
      theta[i] = std::sqrt(2.0 * k / q) * std::exp(-shift * shift * rr / (4.0 * q));
    }
  }
}

void entropy(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = g(x[i]);
}

void log2(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log2(x[i]);
}

void exp(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

}  // namespace satqkd::kernels::detail::scalar
