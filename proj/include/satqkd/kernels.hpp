#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "satqkd/conventions.hpp"

// Batch kernels behind the sweep engine. Each kernel has a scalar reference
// implementation and an AVX2/FMA implementation selected at runtime. Both
// evaluate every element independently, so results never depend on how a
// batch is split into chunks.
namespace satqkd::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
std::optional<Isa> parse_isa(std::string_view s);  // "scalar", "avx2"

bool isa_available(Isa isa);
// Best ISA supported by the running CPU.
Isa best_isa();

// Per-element status bits of key_rate_batch.
namespace status {
inline constexpr std::uint8_t ok = 0;
inline constexpr std::uint8_t bad_conditional_variance = 1 << 0;  // s <= 0 or r − t²/s <= 0
inline constexpr std::uint8_t bad_radicand = 1 << 1;              // Δ² − 4D² < −tol
inline constexpr std::uint8_t eigenvalue_below_one = 1 << 2;      // λ₂ < 1 − tol
inline constexpr std::uint8_t lambda3_below_one = 1 << 3;         // λ₃ < 1 − tol
}  // namespace status

struct KeyRateInputs {
  std::span<const double> variance;        // V >= 1
  std::span<const double> transmissivity;  // T in (0, 1]
  std::span<const double> excess_noise;    // ε >= 0
  std::span<const double> overlap;         // Θ in [0, 1]
};

struct KeyRateOutputs {
  std::span<double> r, s, t;
  std::span<double> lambda1, lambda2, lambda3;
  std::span<double> mutual_information, holevo, key_rate;
  std::span<std::uint8_t> status;
};

struct KeyRateConventions {
  NoiseConvention noise = NoiseConvention::chi;
  Lambda3Convention lambda3 = Lambda3Convention::det;
};

// Evaluates r = V, s = T[(Θ²V + 1 − Θ²) + n], t = Θ√(T(V²−1)) and
// I = ½log2(r/(r − t²/s)), S = g(λ₁) + g(λ₂) − g(λ₃), K = I − S per element.
// Inputs are assumed inside their domains; numerical-domain failures set
// status bits (outputs of a flagged element are unspecified). All spans must
// have the same length.
void key_rate_batch(Isa isa, KeyRateConventions conventions, const KeyRateInputs& in,
                    const KeyRateOutputs& out);

// Θ(δ) for each (δ, Ω₀/σ). Requires 1 + δ > 0 elementwise.
void overlap_batch(Isa isa, OverlapFormula formula, std::span<const double> delta,
                   std::span<const double> ratio, std::span<double> theta);

// Entropy function g elementwise (arguments assumed >= 1).
void entropy_batch(Isa isa, std::span<const double> x, std::span<double> out);

// Elementary functions used by the kernels (positive finite inputs for log2).
void log2_batch(Isa isa, std::span<const double> x, std::span<double> out);
void exp_batch(Isa isa, std::span<const double> x, std::span<double> out);

}  // namespace satqkd::kernels
