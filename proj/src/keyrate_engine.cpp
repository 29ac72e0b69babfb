#include "satqkd/keyrate_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "satqkd/errors.hpp"
#include "satqkd/kernels.hpp"

namespace satqkd::keyrate {

namespace {

// One-element evaluation through the scalar reference kernel, so single
// queries and sweeps share the same arithmetic.
struct Evaluation {
  KeyRateResult result;
  std::uint8_t status = kernels::status::ok;
};

Evaluation evaluate(const ProtocolParams& p) {
  p.validate();
  const std::array<double, 1> v{p.variance}, tr{p.transmissivity}, ex{p.excess_noise},
      ov{p.overlap};
  Evaluation e;
  KeyRateResult& k = e.result;
  kernels::key_rate_batch(kernels::Isa::scalar, {p.noise, p.lambda3}, {v, tr, ex, ov},
                          {{&k.r, 1}, {&k.s, 1}, {&k.t, 1}, {&k.lambda1, 1}, {&k.lambda2, 1},
                           {&k.lambda3, 1}, {&k.mutual_information, 1}, {&k.holevo, 1},
                           {&k.key_rate, 1}, {&e.status, 1}});
  k.effective_rate = std::max(k.key_rate, 0.0);
  return e;
}

std::string describe(const KeyRateResult& k) {
  std::ostringstream os;
  os.precision(17);
  os << "r=" << k.r << " s=" << k.s << " t=" << k.t;
  return os.str();
}

void check_correlation(const Evaluation& e) {
  if (e.status & kernels::status::bad_conditional_variance) {
    throw DomainError("unphysical correlation, r - t^2/s <= 0: " + describe(e.result));
  }
}

void check_spectrum(const Evaluation& e) {
  using namespace kernels::status;
  if (e.status & bad_radicand) {
    throw NumericalError("negative spectral radicand: " + describe(e.result));
  }
  if (e.status & eigenvalue_below_one) {
    throw NumericalError("symplectic eigenvalue below 1: " + describe(e.result));
  }
  if (e.status & lambda3_below_one) {
    throw NumericalError("conditional eigenvalue below 1: " + describe(e.result));
  }
}

void require(bool ok, const char* field, const char* range, double value) {
  if (ok) return;
  std::ostringstream os;
  os << field << " must be " << range << ", got " << value;
  throw DomainError(os.str());
}

}  // namespace

void ProtocolParams::validate() const {
  require(variance >= 1.0 && std::isfinite(variance), "variance", ">= 1", variance);
  require(excess_noise >= 0.0 && std::isfinite(excess_noise), "excess_noise", ">= 0",
          excess_noise);
  require(transmissivity > 0.0 && transmissivity <= 1.0, "transmissivity", "in (0, 1]",
          transmissivity);
  require(overlap >= 0.0 && overlap <= 1.0, "overlap", "in [0, 1]", overlap);
}

double noise_referred_input(const ProtocolParams& params) {
  require(params.transmissivity > 0.0 && params.transmissivity <= 1.0, "transmissivity",
          "in (0, 1]", params.transmissivity);
  return (1.0 - params.transmissivity) / params.transmissivity + params.excess_noise;
}

double noise_term(const ProtocolParams& params) {
  return params.noise == NoiseConvention::chi ? noise_referred_input(params)
                                              : params.excess_noise;
}

double mutual_information(const ProtocolParams& params) {
  const Evaluation e = evaluate(params);
  check_correlation(e);
  return e.result.mutual_information;
}

double holevo_bound(const ProtocolParams& params) {
  const Evaluation e = evaluate(params);
  check_spectrum(e);
  return e.result.holevo;
}

KeyRateResult key_rate(const ProtocolParams& params) {
  const Evaluation e = evaluate(params);
  check_correlation(e);
  check_spectrum(e);
  return e.result;
}

double change_rate_mu(double k, double k_ref) {
  if (!(k_ref > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "reference key rate must be positive, got " << k_ref;
    throw DomainError(os.str());
  }
  return (k - k_ref) / k_ref;
}

}  // namespace satqkd::keyrate
