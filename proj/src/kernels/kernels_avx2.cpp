// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be entered at runtime after cpu_supports_avx2()
// has confirmed the instruction set (the dispatcher guarantees this).
//
// The vector sin/cos/exp routines follow the classic Cephes double-precision
// algorithms: extended-precision argument reduction followed by a rational or
// polynomial approximation on the reduced interval. Accuracy is ~2 ulp per
// element, far inside the tolerance the equivalence tests assert against the
// scalar (libm) kernels.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <span>

#include "asub/kernels.hpp"

namespace asub::kernels::avx2 {
namespace {

// --- sin/cos on |theta| <= kSincosMaxArg ---------------------------------
//
// Arguments larger than this lose too many bits in the reduction x - j*pi/4,
// so such blocks (and non-finite lanes) take a scalar libm fallback.
constexpr double kSincosMaxArg = 1.0e6;

const __m256d kSignMask = _mm256_set1_pd(-0.0);

// 4/pi, and pi/4 split into three parts for extended-precision reduction.
const __m256d kFourOverPi = _mm256_set1_pd(1.2732395447351626862);
const __m256d kDP1 = _mm256_set1_pd(7.85398125648498535156e-1);
const __m256d kDP2 = _mm256_set1_pd(3.77489470793079817668e-8);
const __m256d kDP3 = _mm256_set1_pd(2.69515142907905952645e-15);

// sin(z) ~ z + z^3 * P(z^2) on |z| <= pi/4, highest degree first.
const __m256d kSinC0 = _mm256_set1_pd(1.58962301576546568060e-10);
const __m256d kSinC1 = _mm256_set1_pd(-2.50507477628578072866e-8);
const __m256d kSinC2 = _mm256_set1_pd(2.75573136213857245213e-6);
const __m256d kSinC3 = _mm256_set1_pd(-1.98412698295895385996e-4);
const __m256d kSinC4 = _mm256_set1_pd(8.33333333332211858878e-3);
const __m256d kSinC5 = _mm256_set1_pd(-1.66666666666666307295e-1);

// cos(z) ~ 1 - z^2/2 + z^4 * Q(z^2) on |z| <= pi/4, highest degree first.
const __m256d kCosC0 = _mm256_set1_pd(-1.13585365213876817300e-11);
const __m256d kCosC1 = _mm256_set1_pd(2.08757008419747316778e-9);
const __m256d kCosC2 = _mm256_set1_pd(-2.75573141792967388112e-7);
const __m256d kCosC3 = _mm256_set1_pd(2.48015872888517179954e-5);
const __m256d kCosC4 = _mm256_set1_pd(-1.38888888888730564116e-3);
const __m256d kCosC5 = _mm256_set1_pd(4.16666666666665929218e-2);

inline __m256d poly5(__m256d zz, __m256d c0, __m256d c1, __m256d c2,
                     __m256d c3, __m256d c4, __m256d c5) {
  __m256d y = _mm256_fmadd_pd(c0, zz, c1);
  y = _mm256_fmadd_pd(y, zz, c2);
  y = _mm256_fmadd_pd(y, zz, c3);
  y = _mm256_fmadd_pd(y, zz, c4);
  return _mm256_fmadd_pd(y, zz, c5);
}

// Simultaneous sin and cos of 4 lanes. Handles any finite argument; lanes
// beyond kSincosMaxArg (or non-finite) divert the whole block to libm.
inline void sincos_pd(__m256d x, __m256d* sin_out, __m256d* cos_out) {
  const __m256d absx = _mm256_andnot_pd(kSignMask, x);
  // True for |x| > max arg or NaN (unordered compare).
  const __m256d oob =
      _mm256_cmp_pd(absx, _mm256_set1_pd(kSincosMaxArg), _CMP_NLE_UQ);
  if (_mm256_movemask_pd(oob) != 0) {
    alignas(32) double in[4], s[4], c[4];
    _mm256_store_pd(in, x);
    for (int i = 0; i < 4; ++i) {
      s[i] = std::sin(in[i]);
      c[i] = std::cos(in[i]);
    }
    *sin_out = _mm256_load_pd(s);
    *cos_out = _mm256_load_pd(c);
    return;
  }

  const __m256d sign_x = _mm256_and_pd(kSignMask, x);

  // Octant index j, rounded up to even: x = j*(pi/4) + z, |z| <= pi/4.
  __m128i j = _mm256_cvttpd_epi32(_mm256_mul_pd(absx, kFourOverPi));
  j = _mm_and_si128(_mm_add_epi32(j, _mm_set1_epi32(1)), _mm_set1_epi32(~1));
  const __m256d y = _mm256_cvtepi32_pd(j);

  // With j even, j mod 8 selects the quadrant of a quarter-turn:
  //   swap polynomials when j & 2, negate sin when j & 4,
  //   negate cos when (j + 2) & 4.
  const __m128i two = _mm_set1_epi32(2);
  const __m128i four = _mm_set1_epi32(4);
  const __m128i swap32 = _mm_cmpeq_epi32(_mm_and_si128(j, two), two);
  const __m128i sneg32 = _mm_cmpeq_epi32(_mm_and_si128(j, four), four);
  const __m128i cneg32 =
      _mm_cmpeq_epi32(_mm_and_si128(_mm_add_epi32(j, two), four), four);
  const __m256d swap_mask = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(swap32));
  const __m256d sneg_mask = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(sneg32));
  const __m256d cneg_mask = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(cneg32));

  // Extended-precision reduction: z = ((|x| - y*DP1) - y*DP2) - y*DP3.
  __m256d z = _mm256_fnmadd_pd(y, kDP1, absx);
  z = _mm256_fnmadd_pd(y, kDP2, z);
  z = _mm256_fnmadd_pd(y, kDP3, z);
  const __m256d zz = _mm256_mul_pd(z, z);

  const __m256d sin_poly = _mm256_fmadd_pd(
      _mm256_mul_pd(z, zz), poly5(zz, kSinC0, kSinC1, kSinC2, kSinC3, kSinC4,
                                  kSinC5),
      z);
  __m256d cos_poly = _mm256_mul_pd(
      _mm256_mul_pd(zz, zz),
      poly5(zz, kCosC0, kCosC1, kCosC2, kCosC3, kCosC4, kCosC5));
  cos_poly = _mm256_fnmadd_pd(zz, _mm256_set1_pd(0.5), cos_poly);
  cos_poly = _mm256_add_pd(cos_poly, _mm256_set1_pd(1.0));

  const __m256d sin_sel = _mm256_blendv_pd(sin_poly, cos_poly, swap_mask);
  const __m256d cos_sel = _mm256_blendv_pd(cos_poly, sin_poly, swap_mask);

  // Quadrant signs, plus the odd symmetry of sin in the original sign of x.
  const __m256d sin_flip =
      _mm256_xor_pd(sign_x, _mm256_and_pd(sneg_mask, kSignMask));
  const __m256d cos_flip = _mm256_and_pd(cneg_mask, kSignMask);
  *sin_out = _mm256_xor_pd(sin_sel, sin_flip);
  *cos_out = _mm256_xor_pd(cos_sel, cos_flip);
}

// --- exp ------------------------------------------------------------------

// ln(largest normal) and ln(smallest normal); inputs are clamped here, which
// matches libm to within one representable value at the extremes.
const __m256d kExpHi = _mm256_set1_pd(709.782712893383996843);
const __m256d kExpLo = _mm256_set1_pd(-708.396418532264106224);

const __m256d kLog2E = _mm256_set1_pd(1.4426950408889634074);
// ln 2 split high/low: x - n*C1 - n*C2 keeps the reduction exact.
const __m256d kExpC1 = _mm256_set1_pd(6.93145751953125e-1);
const __m256d kExpC2 = _mm256_set1_pd(1.42860682030941723212e-6);

const __m256d kExpP0 = _mm256_set1_pd(1.26177193074810590878e-4);
const __m256d kExpP1 = _mm256_set1_pd(3.02994407707441961300e-2);
const __m256d kExpP2 = _mm256_set1_pd(9.99999999999999999910e-1);
const __m256d kExpQ0 = _mm256_set1_pd(3.00198505138664455042e-6);
const __m256d kExpQ1 = _mm256_set1_pd(2.52448340349684104192e-3);
const __m256d kExpQ2 = _mm256_set1_pd(2.27265548208155028766e-1);
const __m256d kExpQ3 = _mm256_set1_pd(2.00000000000000000005e0);

// 2^n for int32 lanes n in [-1075, 1024], built as 2^(n/2) * 2^(n - n/2) so
// neither factor's exponent leaves the normal range.
inline __m256d pow2_pd(__m128i n) {
  const __m128i n1 = _mm_srai_epi32(n, 1);
  const __m128i n2 = _mm_sub_epi32(n, n1);
  const __m128i bias = _mm_set1_epi32(1023);
  const __m256i e1 =
      _mm256_slli_epi64(_mm256_cvtepi32_epi64(_mm_add_epi32(n1, bias)), 52);
  const __m256i e2 =
      _mm256_slli_epi64(_mm256_cvtepi32_epi64(_mm_add_epi32(n2, bias)), 52);
  return _mm256_mul_pd(_mm256_castsi256_pd(e1), _mm256_castsi256_pd(e2));
}

inline __m256d exp_pd(__m256d x) {
  const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  const __m256d xc = _mm256_max_pd(_mm256_min_pd(x, kExpHi), kExpLo);

  // n = round(x / ln 2), computed as floor(x*log2(e) + 0.5).
  const __m256d nf = _mm256_floor_pd(
      _mm256_fmadd_pd(xc, kLog2E, _mm256_set1_pd(0.5)));
  const __m128i n = _mm256_cvttpd_epi32(nf);

  __m256d r = _mm256_fnmadd_pd(nf, kExpC1, xc);
  r = _mm256_fnmadd_pd(nf, kExpC2, r);
  const __m256d rr = _mm256_mul_pd(r, r);

  // e^r = 1 + 2 r P(r^2) / (Q(r^2) - r P(r^2)) on |r| <= ln(2)/2.
  __m256d p = _mm256_fmadd_pd(kExpP0, rr, kExpP1);
  p = _mm256_fmadd_pd(p, rr, kExpP2);
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_fmadd_pd(kExpQ0, rr, kExpQ1);
  q = _mm256_fmadd_pd(q, rr, kExpQ2);
  q = _mm256_fmadd_pd(q, rr, kExpQ3);
  const __m256d frac = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  const __m256d er =
      _mm256_fmadd_pd(_mm256_set1_pd(2.0), frac, _mm256_set1_pd(1.0));

  const __m256d result = _mm256_mul_pd(er, pow2_pd(n));
  return _mm256_blendv_pd(result, x, nan_mask);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t nv = n - n % 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < nv; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + i));
  }
  double s = hsum(acc);
  for (std::size_t i = nv; i < n; ++i) s += x[i];
  return s;
}

Sums2 sum_sq(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t nv = n - n % 4;
  __m256d a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < nv; i += 4) {
    const __m256d v = _mm256_loadu_pd(x.data() + i);
    a1 = _mm256_add_pd(a1, v);
    a2 = _mm256_fmadd_pd(v, v, a2);
  }
  Sums2 out{hsum(a1), hsum(a2)};
  for (std::size_t i = nv; i < n; ++i) {
    out.s1 += x[i];
    out.s2 += x[i] * x[i];
  }
  return out;
}

CfSums cf_sums(std::span<const double> x, double u) {
  const std::size_t n = x.size();
  const std::size_t nv = n - n % 4;
  const __m256d uv = _mm256_set1_pd(u);
  __m256d ac = _mm256_setzero_pd();
  __m256d as = _mm256_setzero_pd();
  __m256d ac2 = _mm256_setzero_pd();
  __m256d as2 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < nv; i += 4) {
    const __m256d theta = _mm256_mul_pd(uv, _mm256_loadu_pd(x.data() + i));
    __m256d s, c;
    sincos_pd(theta, &s, &c);
    ac = _mm256_add_pd(ac, c);
    as = _mm256_add_pd(as, s);
    ac2 = _mm256_fmadd_pd(c, c, ac2);
    as2 = _mm256_fmadd_pd(s, s, as2);
  }
  CfSums out{hsum(ac), hsum(as), hsum(ac2), hsum(as2)};
  for (std::size_t i = nv; i < n; ++i) {
    const double c = std::cos(u * x[i]);
    const double s = std::sin(u * x[i]);
    out.cos_sum += c;
    out.sin_sum += s;
    out.cos_sq += c * c;
    out.sin_sq += s * s;
  }
  return out;
}

Sums2 exp_sums(std::span<const double> x, double a) {
  const std::size_t n = x.size();
  const std::size_t nv = n - n % 4;
  const __m256d av = _mm256_set1_pd(a);
  __m256d a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < nv; i += 4) {
    const __m256d e =
        exp_pd(_mm256_mul_pd(av, _mm256_loadu_pd(x.data() + i)));
    a1 = _mm256_add_pd(a1, e);
    a2 = _mm256_fmadd_pd(e, e, a2);
  }
  Sums2 out{hsum(a1), hsum(a2)};
  for (std::size_t i = nv; i < n; ++i) {
    const double e = std::exp(a * x[i]);
    out.s1 += e;
    out.s2 += e * e;
  }
  return out;
}

Sums2 central_sums(std::span<const double> x, double mean) {
  const std::size_t n = x.size();
  const std::size_t nv = n - n % 4;
  const __m256d mv = _mm256_set1_pd(mean);
  __m256d a2 = _mm256_setzero_pd();
  __m256d a4 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < nv; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), mv);
    const __m256d d2 = _mm256_mul_pd(d, d);
    a2 = _mm256_add_pd(a2, d2);
    a4 = _mm256_fmadd_pd(d2, d2, a4);
  }
  Sums2 out{hsum(a2), hsum(a4)};
  for (std::size_t i = nv; i < n; ++i) {
    const double d = x[i] - mean;
    out.s1 += d * d;
    out.s2 += d * d * d * d;
  }
  return out;
}

Sums2 call_payoff_sums(std::span<const double> x, double forward_factor,
                       double strike) {
  const std::size_t n = x.size();
  const std::size_t nv = n - n % 4;
  const __m256d ff = _mm256_set1_pd(forward_factor);
  const __m256d kv = _mm256_set1_pd(strike);
  const __m256d zero = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < nv; i += 4) {
    const __m256d e = exp_pd(_mm256_loadu_pd(x.data() + i));
    const __m256d p = _mm256_max_pd(_mm256_fmsub_pd(ff, e, kv), zero);
    a1 = _mm256_add_pd(a1, p);
    a2 = _mm256_fmadd_pd(p, p, a2);
  }
  Sums2 out{hsum(a1), hsum(a2)};
  for (std::size_t i = nv; i < n; ++i) {
    const double p = std::max(forward_factor * std::exp(x[i]) - strike, 0.0);
    out.s1 += p;
    out.s2 += p * p;
  }
  return out;
}

}  // namespace asub::kernels::avx2

#endif  // x86_64
