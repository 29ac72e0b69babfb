#pragma once

#include "satqkd/conventions.hpp"

// Direct-reconciliation key rate under collective attacks for the degraded
// TMSV state, written in the (r, s, t) parametrization
//   r = V,  s = T[(Θ²V + 1 − Θ²) + n],  t = Θ√(T(V²−1)),
// where n is χ = (1−T)/T + ε or ε depending on the noise convention.
namespace satqkd::keyrate {

struct ProtocolParams {
  double variance = 10.0;         // V >= 1
  double excess_noise = 0.001;    // ε >= 0, shot-noise units
  double transmissivity = 0.9;    // T in (0, 1]
  double overlap = 1.0;           // Θ in [0, 1]
  NoiseConvention noise = NoiseConvention::chi;
  Lambda3Convention lambda3 = Lambda3Convention::det;

  // Throws DomainError naming the offending field.
  void validate() const;
};

struct KeyRateResult {
  double r = 0.0, s = 0.0, t = 0.0;
  double lambda1 = 1.0, lambda2 = 1.0, lambda3 = 1.0;
  double mutual_information = 0.0;  // I(a:b), bits
  double holevo = 0.0;              // S(a:E), bits
  double key_rate = 0.0;            // K = I − S, may be negative
  double effective_rate = 0.0;      // max(K, 0)
};

// χ = (1 − T)/T + ε
double noise_referred_input(const ProtocolParams& params);
// The noise term n that enters s under params.noise.
double noise_term(const ProtocolParams& params);

double mutual_information(const ProtocolParams& params);
double holevo_bound(const ProtocolParams& params);
// Throws DomainError for an unphysical correlation (r − t²/s <= 0) and
// NumericalError when the spectrum leaves the tolerance band.
KeyRateResult key_rate(const ProtocolParams& params);

// μ = (k − k_ref)/k_ref; k_ref <= 0 is a DomainError.
double change_rate_mu(double k, double k_ref);

}  // namespace satqkd::keyrate
