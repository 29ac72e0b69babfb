#include "satqkd/conventions.hpp"

namespace satqkd {

std::string_view to_string(NoiseConvention v) {
  return v == NoiseConvention::chi ? "chi" : "epsilon_only";
}

std::string_view to_string(Lambda3Convention v) {
  return v == Lambda3Convention::det ? "det" : "diagonal";
}

std::string_view to_string(OverlapFormula v) {
  return v == OverlapFormula::derived ? "derived" : "printed";
}

std::string_view to_string(DeltaMethod v) {
  return v == DeltaMethod::perturbative ? "perturbative" : "exact";
}

std::string_view to_string(LossModel v) {
  return v == LossModel::freespace ? "freespace" : "fiber_equivalent";
}

std::string_view to_string(SweepMode v) {
  return v == SweepMode::gravity_only ? "gravity_only" : "full_link";
}

std::optional<NoiseConvention> parse_noise_convention(std::string_view s) {
  if (s == "chi") return NoiseConvention::chi;
  if (s == "epsilon_only") return NoiseConvention::epsilon_only;
  return std::nullopt;
}

std::optional<Lambda3Convention> parse_lambda3_convention(std::string_view s) {
  if (s == "det") return Lambda3Convention::det;
  if (s == "diagonal") return Lambda3Convention::diagonal;
  return std::nullopt;
}

std::optional<OverlapFormula> parse_overlap_formula(std::string_view s) {
  if (s == "derived") return OverlapFormula::derived;
  if (s == "printed") return OverlapFormula::printed;
  return std::nullopt;
}

std::optional<DeltaMethod> parse_delta_method(std::string_view s) {
  if (s == "perturbative") return DeltaMethod::perturbative;
  if (s == "exact") return DeltaMethod::exact;
  return std::nullopt;
}

std::optional<LossModel> parse_loss_model(std::string_view s) {
  if (s == "freespace") return LossModel::freespace;
  if (s == "fiber_equivalent") return LossModel::fiber_equivalent;
  return std::nullopt;
}

std::optional<SweepMode> parse_sweep_mode(std::string_view s) {
  if (s == "gravity_only") return SweepMode::gravity_only;
  if (s == "full_link") return SweepMode::full_link;
  return std::nullopt;
}

}  // namespace satqkd
