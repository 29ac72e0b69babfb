#pragma once

#include <Eigen/Dense>

#include "satqkd/conventions.hpp"

// Phase-space algebra for one- and two-mode Gaussian states. Covariance
// matrices are vacuum-normalized: the vacuum has identity covariance.
// Quadrature ordering within a mode is (x, p); modes are ordered (A, B).
namespace satqkd::gaussian {

struct TwoModeCovariance {
  Eigen::Matrix2d a_block = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d b_block = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d c_block = Eigen::Matrix2d::Zero();

  // [[A, C], [Cᵀ, B]]
  Eigen::Matrix4d full() const;
  static TwoModeCovariance from_full(const Eigen::Matrix4d& m);
};

struct SymplecticSpectrum {
  double lambda1 = 1.0;  // larger eigenvalue
  double lambda2 = 1.0;
  double delta_invariant = 2.0;  // Δ = det A + det B + 2 det C
  double det_invariant = 1.0;    // D = √det σ, so that λ₁₂ = √((Δ ± √(Δ² − 4D²))/2)
};

struct ConditionalState {
  Eigen::Matrix2d covariance;  // σ_B|a
  double lambda3 = 1.0;
};

// Z = diag(1, -1)
Eigen::Matrix2d pauli_z();

// Two-mode squeezed vacuum with modulation variance V >= 1.
TwoModeCovariance make_tmsv(double variance);

// Thermal-loss channel on mode B: B -> T(B + χI), C -> √T C.
// On a TMSV this yields [[V I, √(T(V²−1)) Z], [·, T(V+χ) I]].
TwoModeCovariance apply_thermal_loss(const TwoModeCovariance& state, double transmissivity,
                                     double chi);

// Mixes mode B with a vacuum mode on a beam splitter of amplitude Θ and traces
// the auxiliary mode out. Built explicitly on the three-mode covariance matrix.
TwoModeCovariance apply_overlap_beamsplitter(const TwoModeCovariance& state, double overlap);

// Final shared state [[V I, Θ√(T(V²−1)) Z], [·, T[(Θ²V + 1 − Θ²) + χ] I]].
TwoModeCovariance degraded_state_closed_form(double variance, double transmissivity, double chi,
                                             double overlap);

// Same state assembled from the constructors: TMSV, overlap beam splitter,
// then the thermal-loss channel. (The overlap acts before the loss channel;
// the opposite order gives b = Θ²T(V+χ) + 1 − Θ², which is a different state.)
TwoModeCovariance degraded_state(double variance, double transmissivity, double chi,
                                 double overlap);

// Symplectic eigenvalues. λ₁, λ₂ come from the Hermitian matrix
// σ^{1/2}(iΩ)σ^{1/2}, whose spectrum is ±λ₁, ±λ₂; the invariants Δ, D are
// returned alongside and used to validate the radicand.
SymplecticSpectrum symplectic_spectrum(const TwoModeCovariance& state);

// Closed-form spectrum from the invariants (Δ, D).
SymplecticSpectrum spectrum_from_invariants(double delta_invariant, double det_invariant);

// g(x) = ((x+1)/2) log2((x+1)/2) − ((x−1)/2) log2((x−1)/2), in bits.
double entropy_g(double x);

// σ_B|a = B − C (A₁₁⁻¹ Π) Cᵀ with Π = diag(1, 0).
ConditionalState conditional_after_homodyne(const TwoModeCovariance& state,
                                            Lambda3Convention convention = Lambda3Convention::det);

// ½ log2(V_A / V_A|B) for homodyne detection of the x quadrature on both sides.
double homodyne_mutual_information(const TwoModeCovariance& state);

}  // namespace satqkd::gaussian
