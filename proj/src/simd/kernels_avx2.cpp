// Compiled with -mavx2 -mfma; only reached through the dispatcher after a
// runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "jlps/simd.hpp"
#include "simd/eft.hpp"

namespace jlps::simd::detail {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Vector TwoProduct + TwoSum step: (s, c) <- s + x*y with the rounding
// errors of both operations pushed into c.
inline void dot2_step(__m256d x, __m256d y, __m256d& s, __m256d& c) {
  const __m256d p = _mm256_mul_pd(x, y);
  const __m256d ep = _mm256_fmsub_pd(x, y, p);
  const __m256d t = _mm256_add_pd(s, p);
  const __m256d z = _mm256_sub_pd(t, s);
  const __m256d es = _mm256_add_pd(_mm256_sub_pd(s, _mm256_sub_pd(t, z)), _mm256_sub_pd(p, z));
  s = t;
  c = _mm256_add_pd(c, _mm256_add_pd(ep, es));
}

// Folds vector partial sums (s0, c0, s1, c1) into a compensated scalar pair.
inline void fold(__m256d s0, __m256d c0, __m256d s1, __m256d c1, double& S, double& C) {
  alignas(32) double sv[8], cv[8];
  _mm256_store_pd(sv, s0);
  _mm256_store_pd(sv + 4, s1);
  _mm256_store_pd(cv, c0);
  _mm256_store_pd(cv + 4, c1);
  S = 0.0;
  C = 0.0;
  for (int l = 0; l < 8; ++l) {
    double e;
    eft::two_sum(S, sv[l], S, e);
    C += e + cv[l];
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

double dot_compensated(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), c0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd(), c1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    dot2_step(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0, c0);
    dot2_step(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1, c1);
  }
  for (; i + 4 <= n; i += 4) dot2_step(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0, c0);
  double S, C;
  fold(s0, c0, s1, c1, S, C);
  for (; i < n; ++i) {
    double p, ep, es;
    eft::two_prod(a[i], b[i], p, ep);
    eft::two_sum(S, p, S, es);
    C += ep + es;
  }
  return S + C;
}

double dot3(const double* w, const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), c0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd(), c1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    dot2_step(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i)), _mm256_loadu_pd(b + i), s0, c0);
    dot2_step(_mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(a + i + 4)), _mm256_loadu_pd(b + i + 4), s1,
              c1);
  }
  for (; i + 4 <= n; i += 4)
    dot2_step(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i)), _mm256_loadu_pd(b + i), s0, c0);
  double S, C;
  fold(s0, c0, s1, c1, S, C);
  for (; i < n; ++i) {
    double p, ep, es;
    eft::two_prod(w[i] * a[i], b[i], p, ep);
    eft::two_sum(S, p, S, es);
    C += ep + es;
  }
  return S + C;
}

void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y) {
  std::size_t r = 0;
  // Four rows per pass share the loads of x.
  for (; r + 4 <= rows; r += 4) {
    const double* r0 = A + r * cols;
    const double* r1 = r0 + cols;
    const double* r2 = r1 + cols;
    const double* r3 = r2 + cols;
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd(), a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= cols; i += 4) {
      const __m256d xv = _mm256_loadu_pd(x + i);
      a0 = _mm256_fmadd_pd(_mm256_loadu_pd(r0 + i), xv, a0);
      a1 = _mm256_fmadd_pd(_mm256_loadu_pd(r1 + i), xv, a1);
      a2 = _mm256_fmadd_pd(_mm256_loadu_pd(r2 + i), xv, a2);
      a3 = _mm256_fmadd_pd(_mm256_loadu_pd(r3 + i), xv, a3);
    }
    double y0 = hsum(a0), y1 = hsum(a1), y2 = hsum(a2), y3 = hsum(a3);
    for (; i < cols; ++i) {
      y0 = std::fma(r0[i], x[i], y0);
      y1 = std::fma(r1[i], x[i], y1);
      y2 = std::fma(r2[i], x[i], y2);
      y3 = std::fma(r3[i], x[i], y3);
    }
    y[r] = y0;
    y[r + 1] = y1;
    y[r + 2] = y2;
    y[r + 3] = y3;
  }
  for (; r < rows; ++r) y[r] = dot(A + r * cols, x, cols);
}

void cauchy_row(double mu_j, const double* mu, std::size_t n, int k, double scale, double* out) {
  const __m256d mj = _mm256_set1_pd(mu_j);
  const __m256d sc = _mm256_set1_pd(scale);
  std::size_t l = 0;
  for (; l + 4 <= n; l += 4) {
    const __m256d m = _mm256_loadu_pd(mu + l);
    const __m256d d = _mm256_add_pd(mj, m);
    const __m256d r = _mm256_div_pd(_mm256_mul_pd(mj, m), _mm256_mul_pd(d, d));
    __m256d v = sc;
    for (int i = 0; i < k; ++i) v = _mm256_mul_pd(v, r);
    _mm256_storeu_pd(out + l, v);
  }
  for (; l < n; ++l) {
    const double d = mu_j + mu[l];
    const double r = mu_j * mu[l] / (d * d);
    double v = scale;
    for (int i = 0; i < k; ++i) v *= r;
    out[l] = v;
  }
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

constexpr Kernels kAvx2{dot, dot_compensated, dot3, gemv, cauchy_row, hadamard};

}  // namespace

const Kernels& avx2_kernels() noexcept { return kAvx2; }

}  // namespace jlps::simd::detail
