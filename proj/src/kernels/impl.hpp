#pragma once

#include <cstddef>
#include <cstdint>

#include "satqkd/kernels.hpp"

// Raw-pointer entry points of the per-ISA kernels; `n` elements each.
namespace satqkd::kernels::detail {

struct KeyRatePointers {
  const double* variance;
  const double* transmissivity;
  const double* excess_noise;
  const double* overlap;
  double* r;
  double* s;
  double* t;
  double* lambda1;
  double* lambda2;
  double* lambda3;
  double* mutual_information;
  double* holevo;
  double* key_rate;
  std::uint8_t* status;
};

namespace scalar {
void key_rate(KeyRateConventions c, const KeyRatePointers& p, std::size_t n);
void overlap(OverlapFormula f, const double* delta, const double* ratio, double* theta,
             std::size_t n);
void entropy(const double* x, double* out, std::size_t n);
void log2(const double* x, double* out, std::size_t n);
void exp(const double* x, double* out, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
#define SATQKD_HAVE_AVX2_KERNELS 1
namespace avx2 {
void key_rate(KeyRateConventions c, const KeyRatePointers& p, std::size_t n);
void overlap(OverlapFormula f, const double* delta, const double* ratio, double* theta,
             std::size_t n);
void entropy(const double* x, double* out, std::size_t n);
void log2(const double* x, double* out, std::size_t n);
void exp(const double* x, double* out, std::size_t n);
}  // namespace avx2
#else
#define SATQKD_HAVE_AVX2_KERNELS 0
#endif

}  // namespace satqkd::kernels::detail
