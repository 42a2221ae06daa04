// AVX2+FMA variants. This TU is compiled with -mavx2 -mfma; nothing here may
// be called unless kernels::avx2_available() is true.

#include <immintrin.h>

#include "hsl/kernels.hpp"
#include "small_angle.hpp"

namespace hsl::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// complex multiply of packed [re0 im0 re1 im1] by [c0 d0 c1 d1]
inline __m256d cmul2(__m256d u, __m256d v) {
  __m256d vr = _mm256_movedup_pd(v);
  __m256d vi = _mm256_permute_pd(v, 0xF);
  __m256d us = _mm256_permute_pd(u, 0x5);
  return _mm256_fmaddsub_pd(u, vr, _mm256_mul_pd(us, vi));
}

// Horner forms matching detail::cos_poly / detail::sinc_poly
inline __m256d cos_poly4(__m256d t2) {
  __m256d p = _mm256_set1_pd(-1.0 / 3628800.0);
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(-1.0 / 720.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(-1.0 / 2.0));
  return _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0));
}

inline __m256d sinc_poly4(__m256d t2) {
  __m256d p = _mm256_set1_pd(-1.0 / 39916800.0);
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(-1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(-1.0 / 6.0));
  return _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0));
}

}  // namespace

void cmul(cplx* u, const cplx* v, std::size_t n) {
  double* up = reinterpret_cast<double*>(u);
  const double* vp = reinterpret_cast<const double*>(v);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d uu = _mm256_loadu_pd(up + 2 * i);
    __m256d vv = _mm256_loadu_pd(vp + 2 * i);
    _mm256_storeu_pd(up + 2 * i, cmul2(uu, vv));
  }
  if (i < n) scalar::cmul(u + i, v + i, n - i);
}

void phase_kick(cplx* u, const double* phi, double s, std::size_t n) {
  double* up = reinterpret_cast<double*>(u);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(sv, _mm256_loadu_pd(phi + i));
    __m256d t2 = _mm256_mul_pd(t, t);
    __m256d c = cos_poly4(t2);
    __m256d sn = _mm256_mul_pd(t, sinc_poly4(t2));
    // interleave per-complex [c s c s]
    __m256d cs_lo = _mm256_unpacklo_pd(c, sn);  // [c0 s0 c2 s2]
    __m256d cs_hi = _mm256_unpackhi_pd(c, sn);  // [c1 s1 c3 s3]
    __m256d w0 = _mm256_permute2f128_pd(cs_lo, cs_hi, 0x20);  // [c0 s0 c1 s1]
    __m256d w1 = _mm256_permute2f128_pd(cs_lo, cs_hi, 0x31);  // [c2 s2 c3 s3]
    __m256d u0 = _mm256_loadu_pd(up + 2 * i);
    __m256d u1 = _mm256_loadu_pd(up + 2 * i + 4);
    _mm256_storeu_pd(up + 2 * i, cmul2(u0, w0));
    _mm256_storeu_pd(up + 2 * i + 4, cmul2(u1, w1));
  }
  if (i < n) scalar::phase_kick(u + i, phi + i, s, n - i);
}

void abs2(const cplx* u, double* out, std::size_t n) {
  const double* up = reinterpret_cast<const double*>(u);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(up + 2 * i);
    __m256d b = _mm256_loadu_pd(up + 2 * i + 4);
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    // hadd lane order is [a01 b01 a23 b23] -> restore [0 1 2 3]
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
  }
  if (i < n) scalar::abs2(u + i, out + i, n - i);
}

double sum_abs2(const cplx* u, std::size_t n) {
  const double* up = reinterpret_cast<const double*>(u);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(up + 2 * i);
    __m256d b = _mm256_loadu_pd(up + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  if (i < n) acc += scalar::sum_abs2(u + i, n - i);
  return acc;
}

double weighted_sum_abs2(const cplx* u, const double* w, std::size_t n) {
  const double* up = reinterpret_cast<const double*>(u);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wv = _mm256_loadu_pd(w + i);
    __m256d w0 = _mm256_permute4x64_pd(wv, 0x50);  // [w0 w0 w1 w1]
    __m256d w1 = _mm256_permute4x64_pd(wv, 0xFA);  // [w2 w2 w3 w3]
    __m256d a = _mm256_loadu_pd(up + 2 * i);
    __m256d b = _mm256_loadu_pd(up + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(a, a), w0, acc0);
    acc1 = _mm256_fmadd_pd(_mm256_mul_pd(b, b), w1, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  if (i < n) acc += scalar::weighted_sum_abs2(u + i, w + i, n - i);
  return acc;
}

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  const __m256d signs = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
  __m256d racc = _mm256_setzero_pd(), iacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d av = _mm256_loadu_pd(ap + 2 * i);
    __m256d bv = _mm256_loadu_pd(bp + 2 * i);
    racc = _mm256_fmadd_pd(av, bv, racc);
    __m256d as = _mm256_permute_pd(av, 0x5);
    iacc = _mm256_fmadd_pd(_mm256_mul_pd(as, bv), signs, iacc);
  }
  cplx res(hsum(racc), hsum(iacc));
  if (i < n) res += scalar::dot(a + i, b + i, n - i);
  return res;
}

void axpy(cplx* y, cplx aa, const cplx* x, std::size_t n) {
  double* yp = reinterpret_cast<double*>(y);
  const double* xp = reinterpret_cast<const double*>(x);
  const __m256d ar = _mm256_set1_pd(aa.real());
  const __m256d ai = _mm256_set1_pd(aa.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d prod = _mm256_fmaddsub_pd(xv, ar, _mm256_mul_pd(xs, ai));
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), prod));
  }
  if (i < n) scalar::axpy(y + i, aa, x + i, n - i);
}

}  // namespace hsl::kernels::avx2
