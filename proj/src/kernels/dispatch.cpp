#include <stdexcept>
#include <string>

#include "impl.hpp"
#include "satqkd/kernels.hpp"

namespace satqkd::kernels {

namespace {

void require_same_size(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw std::invalid_argument(std::string(what) + ": span length " + std::to_string(got) +
                                " does not match " + std::to_string(expected));
  }
}

Isa resolve(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel ISA '" + std::string(to_string(isa)) +
                                "' is not supported on this CPU");
  }
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

std::optional<Isa> parse_isa(std::string_view s) {
  if (s == "scalar") return Isa::scalar;
  if (s == "avx2") return Isa::avx2;
  return std::nullopt;
}

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if SATQKD_HAVE_AVX2_KERNELS
  static const bool has_avx2 = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return has_avx2;
#else
  return false;
#endif
}

Isa best_isa() { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

void key_rate_batch(Isa isa, KeyRateConventions conventions, const KeyRateInputs& in,
                    const KeyRateOutputs& out) {
  const std::size_t n = in.variance.size();
  require_same_size(n, in.transmissivity.size(), "transmissivity");
  require_same_size(n, in.excess_noise.size(), "excess_noise");
  require_same_size(n, in.overlap.size(), "overlap");
  for (auto* s : {&out.r, &out.s, &out.t, &out.lambda1, &out.lambda2, &out.lambda3,
                  &out.mutual_information, &out.holevo, &out.key_rate}) {
    require_same_size(n, s->size(), "key rate output");
  }
  require_same_size(n, out.status.size(), "status");

  const detail::KeyRatePointers p{in.variance.data(),   in.transmissivity.data(),
                                  in.excess_noise.data(), in.overlap.data(),
                                  out.r.data(),          out.s.data(),
                                  out.t.data(),          out.lambda1.data(),
                                  out.lambda2.data(),    out.lambda3.data(),
                                  out.mutual_information.data(), out.holevo.data(),
                                  out.key_rate.data(),   out.status.data()};
#if SATQKD_HAVE_AVX2_KERNELS
  if (resolve(isa) == Isa::avx2) return detail::avx2::key_rate(conventions, p, n);
#else
  resolve(isa);
#endif
  detail::scalar::key_rate(conventions, p, n);
}

void overlap_batch(Isa isa, OverlapFormula formula, std::span<const double> delta,
                   std::span<const double> ratio, std::span<double> theta) {
  require_same_size(delta.size(), ratio.size(), "ratio");
  require_same_size(delta.size(), theta.size(), "theta");
#if SATQKD_HAVE_AVX2_KERNELS
  if (resolve(isa) == Isa::avx2) {
    return detail::avx2::overlap(formula, delta.data(), ratio.data(), theta.data(), delta.size());
  }
#else
  resolve(isa);
#endif
  detail::scalar::overlap(formula, delta.data(), ratio.data(), theta.data(), delta.size());
}

void entropy_batch(Isa isa, std::span<const double> x, std::span<double> out) {
  require_same_size(x.size(), out.size(), "entropy output");
#if SATQKD_HAVE_AVX2_KERNELS
  if (resolve(isa) == Isa::avx2) return detail::avx2::entropy(x.data(), out.data(), x.size());
#else
  resolve(isa);
#endif
  detail::scalar::entropy(x.data(), out.data(), x.size());
}

void log2_batch(Isa isa, std::span<const double> x, std::span<double> out) {
  require_same_size(x.size(), out.size(), "log2 output");
#if SATQKD_HAVE_AVX2_KERNELS
  if (resolve(isa) == Isa::avx2) return detail::avx2::log2(x.data(), out.data(), x.size());
#else
  resolve(isa);
#endif
  detail::scalar::log2(x.data(), out.data(), x.size());
}

void exp_batch(Isa isa, std::span<const double> x, std::span<double> out) {
  require_same_size(x.size(), out.size(), "exp output");
#if SATQKD_HAVE_AVX2_KERNELS
  if (resolve(isa) == Isa::avx2) return detail::avx2::exp(x.data(), out.data(), x.size());
#else
  resolve(isa);
#endif
  detail::scalar::exp(x.data(), out.data(), x.size());
}

}  // namespace satqkd::kernels
