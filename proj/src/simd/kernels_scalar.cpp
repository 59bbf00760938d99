#include <cmath>

#include "jlps/simd.hpp"
#include "simd/eft.hpp"

namespace jlps::simd::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

double dot_compensated(const double* a, const double* b, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p, ep, es;
    eft::two_prod(a[i], b[i], p, ep);
    eft::two_sum(s, p, s, es);
    c += ep + es;
  }
  return s + c;
}

double dot3(const double* w, const double* a, const double* b, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p, ep, es;
    eft::two_prod(w[i] * a[i], b[i], p, ep);
    eft::two_sum(s, p, s, es);
    c += ep + es;
  }
  return s + c;
}

void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(A + r * cols, x, cols);
}

void cauchy_row(double mu_j, const double* mu, std::size_t n, int k, double scale, double* out) {
  for (std::size_t l = 0; l < n; ++l) {
    const double d = mu_j + mu[l];
    const double r = mu_j * mu[l] / (d * d);
    double v = scale;
    for (int i = 0; i < k; ++i) v *= r;
    out[l] = v;
  }
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

constexpr Kernels kScalar{dot, dot_compensated, dot3, gemv, cauchy_row, hadamard};

}  // namespace

const Kernels& scalar_kernels() noexcept { return kScalar; }

}  // namespace jlps::simd::detail
