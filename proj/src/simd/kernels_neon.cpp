// AArch64 Advanced SIMD variants (two doubles per register).
#include <arm_neon.h>

#include <cmath>

#include "jlps/simd.hpp"
#include "simd/eft.hpp"

namespace jlps::simd::detail {
namespace {

inline void dot2_step(float64x2_t x, float64x2_t y, float64x2_t& s, float64x2_t& c) {
  const float64x2_t p = vmulq_f64(x, y);
  const float64x2_t ep = vfmaq_f64(vnegq_f64(p), x, y);
  const float64x2_t t = vaddq_f64(s, p);
  const float64x2_t z = vsubq_f64(t, s);
  const float64x2_t es = vaddq_f64(vsubq_f64(s, vsubq_f64(t, z)), vsubq_f64(p, z));
  s = t;
  c = vaddq_f64(c, vaddq_f64(ep, es));
}

inline void fold(float64x2_t s0, float64x2_t c0, float64x2_t s1, float64x2_t c1, double& S, double& C) {
  const double sv[4] = {vgetq_lane_f64(s0, 0), vgetq_lane_f64(s0, 1), vgetq_lane_f64(s1, 0), vgetq_lane_f64(s1, 1)};
  const double cv[4] = {vgetq_lane_f64(c0, 0), vgetq_lane_f64(c0, 1), vgetq_lane_f64(c1, 0), vgetq_lane_f64(c1, 1)};
  S = 0.0;
  C = 0.0;
  for (int l = 0; l < 4; ++l) {
    double e;
    eft::two_sum(S, sv[l], S, e);
    C += e + cv[l];
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t s0 = vdupq_n_f64(0.0), s1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 = vfmaq_f64(s0, vld1q_f64(a + i), vld1q_f64(b + i));
    s1 = vfmaq_f64(s1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(s0, s1));
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

double dot_compensated(const double* a, const double* b, std::size_t n) {
  float64x2_t s0 = vdupq_n_f64(0.0), c0 = s0, s1 = s0, c1 = s0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    dot2_step(vld1q_f64(a + i), vld1q_f64(b + i), s0, c0);
    dot2_step(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2), s1, c1);
  }
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
  float64x2_t s0 = vdupq_n_f64(0.0), c0 = s0, s1 = s0, c1 = s0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    dot2_step(vmulq_f64(vld1q_f64(w + i), vld1q_f64(a + i)), vld1q_f64(b + i), s0, c0);
    dot2_step(vmulq_f64(vld1q_f64(w + i + 2), vld1q_f64(a + i + 2)), vld1q_f64(b + i + 2), s1, c1);
  }
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
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(A + r * cols, x, cols);
}

void cauchy_row(double mu_j, const double* mu, std::size_t n, int k, double scale, double* out) {
  const float64x2_t mj = vdupq_n_f64(mu_j);
  std::size_t l = 0;
  for (; l + 2 <= n; l += 2) {
    const float64x2_t m = vld1q_f64(mu + l);
    const float64x2_t d = vaddq_f64(mj, m);
    const float64x2_t r = vdivq_f64(vmulq_f64(mj, m), vmulq_f64(d, d));
    float64x2_t v = vdupq_n_f64(scale);
    for (int i = 0; i < k; ++i) v = vmulq_f64(v, r);
    vst1q_f64(out + l, v);
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
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

constexpr Kernels kNeon{dot, dot_compensated, dot3, gemv, cauchy_row, hadamard};

}  // namespace

const Kernels& neon_kernels() noexcept { return kNeon; }

}  // namespace jlps::simd::detail
