#pragma once

// Data-parallel inner loops shared by the spectral computations. Each kernel
// has a scalar reference implementation and vectorized variants selected at
// runtime from the host CPU (override with JLPS_SIMD=scalar|avx2|neon).

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace jlps::simd {

enum class Isa { scalar, avx2, neon };

struct Kernels {
  /// sum_i a_i b_i, plain FMA accumulation.
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// sum_i a_i b_i with error-free transformations (Dot2: result as if
  /// computed in twice the working precision, then rounded).
  double (*dot_compensated)(const double* a, const double* b, std::size_t n);
  /// sum_i w_i a_i b_i, compensated in the outer sum.
  double (*dot3)(const double* w, const double* a, const double* b, std::size_t n);
  /// y = A x for a row-major rows x cols matrix, plain accumulation.
  void (*gemv)(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y);
  /// out_l = scale * (mu_j mu_l / (mu_j + mu_l)^2)^k.
  void (*cauchy_row)(double mu_j, const double* mu, std::size_t n, int k, double scale, double* out);
  /// out_i = a_i * b_i.
  void (*hadamard)(const double* a, const double* b, double* out, std::size_t n);
};

const char* isa_name(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;
/// Best available ISA, honouring the JLPS_SIMD environment override.
Isa detect_isa() noexcept;

Isa active_isa() noexcept;
/// Switch the process-wide kernel table; throws if the ISA is unavailable.
void set_isa(Isa isa);

const Kernels& kernels() noexcept;
const Kernels& kernels_for(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), std::min(a.size(), b.size()));
}
inline double dot_compensated(std::span<const double> a, std::span<const double> b) {
  return kernels().dot_compensated(a.data(), b.data(), std::min(a.size(), b.size()));
}
inline double dot3(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  return kernels().dot3(w.data(), a.data(), b.data(), std::min({w.size(), a.size(), b.size()}));
}

/// v^T H v for a symmetric row-major n x n matrix, compensated throughout.
double quad_form(std::span<const double> H, std::span<const double> v);

namespace detail {
const Kernels& scalar_kernels() noexcept;
#if defined(JLPS_WITH_AVX2)
const Kernels& avx2_kernels() noexcept;
#endif
#if defined(JLPS_WITH_NEON)
const Kernels& neon_kernels() noexcept;
#endif
}  // namespace detail

}  // namespace jlps::simd
