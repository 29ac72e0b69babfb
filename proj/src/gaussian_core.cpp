#include "satqkd/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "satqkd/constants.hpp"
#include "satqkd/errors.hpp"

namespace satqkd::gaussian {

namespace {

using Eigen::Matrix2d;
using Eigen::Matrix4d;

constexpr double kTol = constants::physical_tolerance;

void require_overlap(double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    std::ostringstream os;
    os << "overlap must lie in [0, 1], got " << overlap;
    throw DomainError(os.str());
  }
}

void require_transmissivity(double transmissivity) {
  if (!(transmissivity > 0.0 && transmissivity <= 1.0)) {
    std::ostringstream os;
    os << "transmissivity must lie in (0, 1], got " << transmissivity;
    throw DomainError(os.str());
  }
}

// Symplectic form for two modes, (x_A, p_A, x_B, p_B).
Matrix4d symplectic_form() {
  Matrix4d omega = Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

}  // namespace

Matrix4d TwoModeCovariance::full() const {
  Matrix4d m;
  m.topLeftCorner<2, 2>() = a_block;
  m.topRightCorner<2, 2>() = c_block;
  m.bottomLeftCorner<2, 2>() = c_block.transpose();
  m.bottomRightCorner<2, 2>() = b_block;
  return m;
}

TwoModeCovariance TwoModeCovariance::from_full(const Matrix4d& m) {
  TwoModeCovariance s;
  s.a_block = m.topLeftCorner<2, 2>();
  s.c_block = m.topRightCorner<2, 2>();
  s.b_block = m.bottomRightCorner<2, 2>();
  return s;
}

Matrix2d pauli_z() { return Eigen::Vector2d(1.0, -1.0).asDiagonal(); }

TwoModeCovariance make_tmsv(double variance) {
  if (!(variance >= 1.0) || !std::isfinite(variance)) {
    std::ostringstream os;
    os << "modulation variance must be >= 1, got " << variance;
    throw DomainError(os.str());
  }
  TwoModeCovariance s;
  s.a_block = variance * Matrix2d::Identity();
  s.b_block = variance * Matrix2d::Identity();
  s.c_block = std::sqrt(variance * variance - 1.0) * pauli_z();
  return s;
}

TwoModeCovariance apply_thermal_loss(const TwoModeCovariance& state, double transmissivity,
                                     double chi) {
  require_transmissivity(transmissivity);
  if (!(chi >= 0.0)) {
    std::ostringstream os;
    os << "input-referred noise must be >= 0, got " << chi;
    throw DomainError(os.str());
  }
  TwoModeCovariance out = state;
  out.c_block = std::sqrt(transmissivity) * state.c_block;
  out.b_block = transmissivity * (state.b_block + chi * Matrix2d::Identity());
  return out;
}

TwoModeCovariance apply_overlap_beamsplitter(const TwoModeCovariance& state, double overlap) {
  require_overlap(overlap);

  // Modes (A, B, ⊥) with the auxiliary mode in vacuum.
  Eigen::Matrix<double, 6, 6> gamma = Eigen::Matrix<double, 6, 6>::Identity();
  gamma.topLeftCorner<4, 4>() = state.full();

  const double leak = std::sqrt(1.0 - overlap * overlap);
  Matrix4d splitter;
  splitter << overlap * Matrix2d::Identity(), leak * Matrix2d::Identity(),
      -leak * Matrix2d::Identity(), overlap * Matrix2d::Identity();

  Eigen::Matrix<double, 6, 6> y = Eigen::Matrix<double, 6, 6>::Zero();
  y.topLeftCorner<2, 2>() = Matrix2d::Identity();
  y.bottomRightCorner<4, 4>() = splitter;

  const Eigen::Matrix<double, 6, 6> mixed = y.transpose() * gamma * y;
  return TwoModeCovariance::from_full(mixed.topLeftCorner<4, 4>());
}

TwoModeCovariance degraded_state_closed_form(double variance, double transmissivity, double chi,
                                             double overlap) {
  if (!(variance >= 1.0)) throw DomainError("modulation variance must be >= 1");
  require_transmissivity(transmissivity);
  require_overlap(overlap);
  const double o2 = overlap * overlap;
  TwoModeCovariance s;
  s.a_block = variance * Matrix2d::Identity();
  s.c_block = overlap * std::sqrt(transmissivity * (variance * variance - 1.0)) * pauli_z();
  s.b_block = transmissivity * ((o2 * variance + 1.0 - o2) + chi) * Matrix2d::Identity();
  return s;
}

TwoModeCovariance degraded_state(double variance, double transmissivity, double chi,
                                 double overlap) {
  return apply_thermal_loss(apply_overlap_beamsplitter(make_tmsv(variance), overlap),
                            transmissivity, chi);
}

namespace {

// Δ² − 4D² = (Δ − 2D)(Δ + 2D) and λ₁,₂ = (√(Δ + 2D) ± √(Δ − 2D))/2. `scale` is
// the magnitude whose cancellation produced Δ − 2D.
SymplecticSpectrum spectrum_checked(double delta_invariant, double det_invariant, double scale) {
  double minus = delta_invariant - 2.0 * det_invariant;
  const double plus = delta_invariant + 2.0 * det_invariant;
  if (minus < 0.0) {
    if (minus < -kTol * std::max(1.0, scale)) {
      std::ostringstream os;
      os.precision(17);
      os << "negative spectral radicand: Δ=" << delta_invariant << " D=" << det_invariant
         << " Δ-2D=" << minus;
      throw NumericalError(os.str());
    }
    minus = 0.0;
  }
  if (!(plus >= 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "negative spectral radicand: Δ=" << delta_invariant << " D=" << det_invariant;
    throw NumericalError(os.str());
  }
  const double sum = std::sqrt(plus);
  const double diff = std::sqrt(minus);
  return {0.5 * (sum + diff), 0.5 * (sum - diff), delta_invariant, det_invariant};
}

}  // namespace

SymplecticSpectrum spectrum_from_invariants(double delta_invariant, double det_invariant) {
  return spectrum_checked(delta_invariant, det_invariant, std::abs(delta_invariant));
}

SymplecticSpectrum symplectic_spectrum(const TwoModeCovariance& state) {
  const Matrix4d sigma = state.full();
  if (!sigma.allFinite()) throw DomainError("covariance matrix has non-finite entries");

  const double det_a = state.a_block.determinant();
  const double det_b = state.b_block.determinant();
  const double det_c = state.c_block.determinant();
  const double delta_inv = det_a + det_b + 2.0 * det_c;
  // det σ carries the same cancellation as Δ, so the radicand check is scaled
  // by the magnitude of the terms rather than by Δ itself.
  const double scale = std::abs(det_a) + std::abs(det_b) + 2.0 * std::abs(det_c);
  const double det_full = sigma.determinant();
  if (det_full < 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "covariance determinant is negative: " << det_full;
    throw NumericalError(os.str());
  }
  const double det_inv = std::sqrt(det_full);
  // Raises on a significantly negative radicand.
  (void)spectrum_checked(delta_inv, det_inv, scale);

  Eigen::SelfAdjointEigenSolver<Matrix4d> sigma_eig(sigma);
  if (sigma_eig.info() != Eigen::Success || sigma_eig.eigenvalues().minCoeff() <= 0.0) {
    throw NumericalError("covariance matrix is not positive definite");
  }
  const Matrix4d root = sigma_eig.operatorSqrt();
  const Eigen::Matrix4cd hermitian =
      root.cast<std::complex<double>>() *
      (std::complex<double>(0.0, 1.0) * symplectic_form().cast<std::complex<double>>()) *
      root.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> herm_eig(hermitian, Eigen::EigenvaluesOnly);
  if (herm_eig.info() != Eigen::Success) throw NumericalError("symplectic eigen-solve failed");

  // Ascending: −λ₁, −λ₂, λ₂, λ₁.
  const Eigen::Vector4d ev = herm_eig.eigenvalues();
  SymplecticSpectrum out;
  out.lambda1 = 0.5 * (ev(3) - ev(0));
  out.lambda2 = 0.5 * (ev(2) - ev(1));
  out.delta_invariant = delta_inv;
  out.det_invariant = det_inv;
  return out;
}

double entropy_g(double x) {
  if (!(x >= 1.0 - kTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "entropy argument must be >= 1, got " << x;
    throw DomainError(os.str());
  }
  if (x <= 1.0 + constants::entropy_limit_window) return 0.0;
  const double up = 0.5 * (x + 1.0);
  const double down = 0.5 * (x - 1.0);
  return up * std::log2(up) - down * std::log2(down);
}

ConditionalState conditional_after_homodyne(const TwoModeCovariance& state,
                                            Lambda3Convention convention) {
  const double a11 = state.a_block(0, 0);
  if (!(a11 > 0.0)) {
    std::ostringstream os;
    os << "A11 must be positive, got " << a11;
    throw DomainError(os.str());
  }
  const Matrix2d projector = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  ConditionalState out;
  out.covariance =
      state.b_block - state.c_block.transpose() * (projector / a11) * state.c_block;
  if (convention == Lambda3Convention::diagonal) {
    out.lambda3 = out.covariance(1, 1);
  } else {
    const double det = out.covariance.determinant();
    if (det < 0.0) {
      std::ostringstream os;
      os.precision(17);
      os << "conditional covariance has negative determinant " << det;
      throw NumericalError(os.str());
    }
    out.lambda3 = std::sqrt(det);
  }
  return out;
}

double homodyne_mutual_information(const TwoModeCovariance& state) {
  const double va = state.a_block(0, 0);
  const double vb = state.b_block(0, 0);
  const double cov = state.c_block(0, 0);
  if (!(va > 0.0 && vb > 0.0)) throw DomainError("quadrature variances must be positive");
  const double conditional = va - cov * cov / vb;
  if (!(conditional > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "conditional variance must be positive, got " << conditional;
    throw DomainError(os.str());
  }
  return 0.5 * std::log2(va / conditional);
}

}  // namespace satqkd::gaussian
