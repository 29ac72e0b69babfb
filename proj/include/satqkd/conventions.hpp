#pragma once

#include <optional>
#include <string_view>

namespace satqkd {

// Noise term entering Bob's variance s = T[(Θ²V + 1 − Θ²) + n].
//   chi:          n = (1 − T)/T + ε, the input-referred noise of the loss channel.
//   epsilon_only: n = ε.
enum class NoiseConvention { chi, epsilon_only };

// Symplectic eigenvalue of Bob's state conditioned on Alice's homodyne result.
//   det:      λ₃ = √det σ_B|a.
//   diagonal: λ₃ = s.
enum class Lambda3Convention { det, diagonal };

// Closed form used for the wave-packet overlap Θ(δ).
//   derived: consistent with the packet dilation Ω_B/Ω_A = (1+δ)², agrees with quadrature.
//   printed: √(2/(1+(1+δ)²))·(1+δ)⁻¹·exp(−δ²Ω₀²/(4(1+(1+δ)²)σ²)).
enum class OverlapFormula { derived, printed };

enum class DeltaMethod { perturbative, exact };

enum class LossModel { freespace, fiber_equivalent };

enum class SweepMode { gravity_only, full_link };

std::string_view to_string(NoiseConvention v);
std::string_view to_string(Lambda3Convention v);
std::string_view to_string(OverlapFormula v);
std::string_view to_string(DeltaMethod v);
std::string_view to_string(LossModel v);
std::string_view to_string(SweepMode v);

std::optional<NoiseConvention> parse_noise_convention(std::string_view s);
std::optional<Lambda3Convention> parse_lambda3_convention(std::string_view s);
std::optional<OverlapFormula> parse_overlap_formula(std::string_view s);
std::optional<DeltaMethod> parse_delta_method(std::string_view s);
std::optional<LossModel> parse_loss_model(std::string_view s);
std::optional<SweepMode> parse_sweep_mode(std::string_view s);

}  // namespace satqkd
