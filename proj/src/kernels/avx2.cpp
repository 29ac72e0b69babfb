// AVX2/FMA variants of the batch kernels. Only reached through the runtime
// dispatcher after a CPU feature check; everything after the target pragma is
// compiled for AVX2 and must not be called otherwise.
#include <algorithm>
#include <cstdint>
#include <cstring>

#include "impl.hpp"
#include "satqkd/constants.hpp"

#if SATQKD_HAVE_AVX2_KERNELS

#include <immintrin.h>

#pragma GCC push_options
#pragma GCC target("avx2,fma")

namespace satqkd::kernels::detail::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(set1(-0.0), x); }

inline __m256d select(__m256d mask, __m256d if_true, __m256d if_false) {
  return _mm256_blendv_pd(if_false, if_true, mask);
}

// Integer part of a double in [-2^51, 2^51], as int64 lanes, and back.
constexpr double kRoundMagic = 6755399441055744.0;  // 1.5 * 2^52

inline __m256i to_int64(__m256d rounded) {
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(rounded, set1(kRoundMagic))),
                          _mm256_castpd_si256(set1(kRoundMagic)));
}

inline __m256d from_int64(__m256i v) {
  return _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_add_epi64(v, _mm256_castpd_si256(set1(kRoundMagic)))),
      set1(kRoundMagic));
}

// 2^n for integer n in [-1022, 1023].
inline __m256d pow2i(__m256i n) {
  return _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(n, _mm256_set1_epi64x(1023)), 52));
}

// Splits positive normal x into e + log1p(f) with 1 + f in [√½, √2] and returns
// log1p(f) via the fdlibm minimax kernel; the exponent goes to `expo`.
inline __m256d log_reduced(__m256d x, __m256d& expo) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
  const __m256i mant_bits =
      _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                      _mm256_set1_epi64x(0x3FF0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);  // [1, 2)

  const __m256d big = _mm256_cmp_pd(m, set1(1.4142135623730951), _CMP_GT_OQ);
  m = select(big, _mm256_mul_pd(m, set1(0.5)), m);
  e = _mm256_add_epi64(e, _mm256_and_si256(_mm256_castpd_si256(big), _mm256_set1_epi64x(1)));
  expo = from_int64(e);

  const __m256d f = _mm256_sub_pd(m, set1(1.0));
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(set1(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  const __m256d w = _mm256_mul_pd(z, z);
  const __m256d t1 = _mm256_mul_pd(
      w, _mm256_fmadd_pd(w, _mm256_fmadd_pd(w, set1(1.531383769920937332e-01),
                                            set1(2.222219843214978396e-01)),
                         set1(3.999999999940941908e-01)));
  const __m256d t2 = _mm256_mul_pd(
      z, _mm256_fmadd_pd(
             w,
             _mm256_fmadd_pd(w, _mm256_fmadd_pd(w, set1(1.479819860511658591e-01),
                                                set1(1.818357216161805012e-01)),
                             set1(2.857142874366239149e-01)),
             set1(6.666666666666735130e-01)));
  const __m256d rr = _mm256_add_pd(t1, t2);
  const __m256d hfsq = _mm256_mul_pd(set1(0.5), _mm256_mul_pd(f, f));
  return _mm256_sub_pd(f, _mm256_fnmadd_pd(s, _mm256_add_pd(hfsq, rr), hfsq));
}

inline __m256d vlog2(__m256d x) {
  __m256d e;
  const __m256d log1pf = log_reduced(x, e);
  return _mm256_fmadd_pd(log1pf, set1(1.4426950408889634), e);
}

inline __m256d vexp(__m256d x) {
  const __m256d hi_limit = set1(709.782712893384);
  const __m256d lo_limit = set1(-745.1332191019412);
  const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo_limit), hi_limit);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, set1(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, set1(6.93147180369123816490e-01), xc);
  r = _mm256_fnmadd_pd(n, set1(1.90821492927058770002e-10), r);

  // Taylor polynomial to degree 13 on |r| <= ln2/2.
  __m256d p = set1(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, set1(0.5));
  p = _mm256_fmadd_pd(p, r, set1(1.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0));

  // Two-step scaling keeps 2^n1, 2^n2 normal down to the subnormal range.
  const __m256d half_n = _mm256_floor_pd(_mm256_mul_pd(n, set1(0.5)));
  const __m256i h1 = to_int64(half_n);
  const __m256i h2 = _mm256_sub_epi64(to_int64(n), h1);
  __m256d out = _mm256_mul_pd(_mm256_mul_pd(p, pow2i(h1)), pow2i(h2));

  out = select(_mm256_cmp_pd(x, hi_limit, _CMP_GT_OQ), set1(__builtin_inf()), out);
  out = select(_mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ), _mm256_setzero_pd(), out);
  return out;
}

inline __m256d vg(__m256d x) {
  const __m256d at_limit =
      _mm256_cmp_pd(x, set1(1.0 + constants::entropy_limit_window), _CMP_LE_OQ);
  const __m256d up = _mm256_mul_pd(set1(0.5), _mm256_add_pd(x, set1(1.0)));
  const __m256d down = select(at_limit, set1(1.0), _mm256_mul_pd(set1(0.5), _mm256_sub_pd(x, set1(1.0))));
  const __m256d val =
      _mm256_sub_pd(_mm256_mul_pd(up, vlog2(up)), _mm256_mul_pd(down, vlog2(down)));
  return select(at_limit, _mm256_setzero_pd(), val);
}

inline std::uint8_t lanes_to_bits(__m256d mask, std::size_t lane) {
  return static_cast<std::uint8_t>((_mm256_movemask_pd(mask) >> lane) & 1);
}

struct KeyRateLane {
  __m256d r, s, t, l1, l2, l3, info, holevo, key;
  __m256d bad_cond, bad_rad, bad_l2, bad_l3;
};

inline KeyRateLane key_rate_lane(bool chi, bool det, __m256d v, __m256d tr, __m256d ex,
                                 __m256d ov) {
  const double tol = constants::physical_tolerance;
  const __m256d one = set1(1.0);
  const __m256d zero = _mm256_setzero_pd();
  KeyRateLane o;

  const __m256d o2 = _mm256_mul_pd(ov, ov);
  const __m256d noise =
      chi ? _mm256_add_pd(_mm256_div_pd(_mm256_sub_pd(one, tr), tr), ex) : ex;

  o.r = v;
  // T[(Θ²V + 1 − Θ²) + n], same association as the scalar kernel
  o.s = _mm256_mul_pd(tr, _mm256_add_pd(_mm256_sub_pd(_mm256_add_pd(_mm256_mul_pd(o2, v), one), o2),
                                        noise));
  const __m256d corr = _mm256_mul_pd(tr, _mm256_sub_pd(_mm256_mul_pd(v, v), one));
  o.t = _mm256_mul_pd(ov, _mm256_sqrt_pd(corr));
  const __m256d t2 = _mm256_mul_pd(o2, corr);

  const __m256d cond = _mm256_sub_pd(o.r, _mm256_div_pd(t2, o.s));
  o.bad_cond = _mm256_or_pd(_mm256_cmp_pd(o.s, zero, _CMP_NGT_UQ),
                            _mm256_cmp_pd(cond, zero, _CMP_NGT_UQ));
  o.info = _mm256_mul_pd(set1(0.5), vlog2(_mm256_div_pd(o.r, select(o.bad_cond, one, cond))));

  const __m256d diff = vabs(_mm256_sub_pd(o.r, o.s));
  const __m256d rps = _mm256_add_pd(o.r, o.s);
  __m256d plus = _mm256_sub_pd(_mm256_mul_pd(rps, rps), _mm256_mul_pd(set1(4.0), t2));
  const __m256d delta_inv = _mm256_sub_pd(
      _mm256_add_pd(_mm256_mul_pd(o.r, o.r), _mm256_mul_pd(o.s, o.s)), _mm256_mul_pd(set1(2.0), t2));
  const __m256d rad_floor = _mm256_mul_pd(set1(-tol), _mm256_max_pd(one, delta_inv));
  o.bad_rad = _mm256_cmp_pd(plus, rad_floor, _CMP_LT_OQ);
  plus = _mm256_max_pd(plus, zero);

  const __m256d sum = _mm256_sqrt_pd(plus);
  __m256d l1 = _mm256_mul_pd(set1(0.5), _mm256_add_pd(sum, diff));
  __m256d l2 = _mm256_mul_pd(set1(0.5), _mm256_sub_pd(sum, diff));
  o.bad_l2 = _mm256_cmp_pd(l2, set1(1.0 - tol), _CMP_LT_OQ);
  o.l1 = _mm256_max_pd(l1, one);
  o.l2 = _mm256_max_pd(l2, one);

  __m256d l3;
  __m256d bad_l3 = zero;
  if (det) {
    const __m256d sq = _mm256_mul_pd(o.s, _mm256_sub_pd(o.s, _mm256_div_pd(t2, o.r)));
    bad_l3 = _mm256_cmp_pd(sq, zero, _CMP_LT_OQ);
    l3 = _mm256_sqrt_pd(_mm256_max_pd(sq, zero));
  } else {
    l3 = o.s;
  }
  o.bad_l3 = _mm256_or_pd(bad_l3, _mm256_cmp_pd(l3, set1(1.0 - tol), _CMP_LT_OQ));
  o.l3 = _mm256_max_pd(l3, one);

  o.holevo = _mm256_sub_pd(_mm256_add_pd(vg(o.l1), vg(o.l2)), vg(o.l3));
  o.key = _mm256_sub_pd(o.info, o.holevo);
  return o;
}

template <class Body>
void for_each_block(std::size_t n, Body&& body) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) body(i, kLanes);
  if (i < n) body(i, n - i);
}

// Loads `count` lanes starting at p, padding the rest with `fill`.
inline __m256d load_lanes(const double* p, std::size_t count, double fill) {
  if (count == kLanes) return _mm256_loadu_pd(p);
  alignas(32) double buf[kLanes] = {fill, fill, fill, fill};
  std::memcpy(buf, p, count * sizeof(double));
  return _mm256_load_pd(buf);
}

inline void store_lanes(double* p, std::size_t count, __m256d v) {
  if (count == kLanes) {
    _mm256_storeu_pd(p, v);
    return;
  }
  alignas(32) double buf[kLanes];
  _mm256_store_pd(buf, v);
  std::memcpy(p, buf, count * sizeof(double));
}

}  // namespace

void key_rate(KeyRateConventions c, const KeyRatePointers& p, std::size_t n) {
  const bool chi = c.noise == NoiseConvention::chi;
  const bool det = c.lambda3 == Lambda3Convention::det;
  for_each_block(n, [&](std::size_t i, std::size_t count) {
    const KeyRateLane o =
        key_rate_lane(chi, det, load_lanes(p.variance + i, count, 2.0),
                      load_lanes(p.transmissivity + i, count, 1.0),
                      load_lanes(p.excess_noise + i, count, 0.0),
                      load_lanes(p.overlap + i, count, 1.0));
    store_lanes(p.r + i, count, o.r);
    store_lanes(p.s + i, count, o.s);
    store_lanes(p.t + i, count, o.t);
    store_lanes(p.lambda1 + i, count, o.l1);
    store_lanes(p.lambda2 + i, count, o.l2);
    store_lanes(p.lambda3 + i, count, o.l3);
    store_lanes(p.mutual_information + i, count, o.info);
    store_lanes(p.holevo + i, count, o.holevo);
    store_lanes(p.key_rate + i, count, o.key);
    for (std::size_t lane = 0; lane < count; ++lane) {
      p.status[i + lane] = static_cast<std::uint8_t>(
          (lanes_to_bits(o.bad_cond, lane) ? status::bad_conditional_variance : 0) |
          (lanes_to_bits(o.bad_rad, lane) ? status::bad_radicand : 0) |
          (lanes_to_bits(o.bad_l2, lane) ? status::eigenvalue_below_one : 0) |
          (lanes_to_bits(o.bad_l3, lane) ? status::lambda3_below_one : 0));
    }
  });
}

void overlap(OverlapFormula f, const double* delta, const double* ratio, double* theta,
             std::size_t n) {
  const __m256d one = set1(1.0);
  for_each_block(n, [&](std::size_t i, std::size_t count) {
    const __m256d d = load_lanes(delta + i, count, 0.0);
    const __m256d rat = load_lanes(ratio + i, count, 1.0);
    const __m256d rr = _mm256_mul_pd(rat, rat);
    const __m256d opd = _mm256_add_pd(one, d);
    __m256d out;
    if (f == OverlapFormula::printed) {
      const __m256d q = _mm256_add_pd(one, _mm256_mul_pd(opd, opd));
      const __m256d pre = _mm256_div_pd(_mm256_sqrt_pd(_mm256_div_pd(set1(2.0), q)), opd);
      const __m256d arg = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(set1(-1.0), d), d), rr),
                                        _mm256_mul_pd(set1(4.0), q));
      out = _mm256_mul_pd(pre, vexp(arg));
    } else {
      const __m256d k = _mm256_mul_pd(opd, opd);
      const __m256d shift = _mm256_mul_pd(d, _mm256_add_pd(set1(2.0), d));
      const __m256d q = _mm256_add_pd(one, _mm256_mul_pd(k, k));
      const __m256d pre = _mm256_sqrt_pd(_mm256_div_pd(_mm256_mul_pd(set1(2.0), k), q));
      const __m256d arg =
          _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(set1(-1.0), shift), shift), rr),
                        _mm256_mul_pd(set1(4.0), q));
      out = _mm256_mul_pd(pre, vexp(arg));
    }
    store_lanes(theta + i, count, out);
  });
}

void entropy(const double* x, double* out, std::size_t n) {
  for_each_block(n, [&](std::size_t i, std::size_t count) {
    store_lanes(out + i, count, vg(load_lanes(x + i, count, 2.0)));
  });
}

void log2(const double* x, double* out, std::size_t n) {
  for_each_block(n, [&](std::size_t i, std::size_t count) {
    store_lanes(out + i, count, vlog2(load_lanes(x + i, count, 1.0)));
  });
}

void exp(const double* x, double* out, std::size_t n) {
  for_each_block(n, [&](std::size_t i, std::size_t count) {
    store_lanes(out + i, count, vexp(load_lanes(x + i, count, 0.0)));
  });
}

}  // namespace satqkd::kernels::detail::avx2

#pragma GCC pop_options

#endif  // SATQKD_HAVE_AVX2_KERNELS
