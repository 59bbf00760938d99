#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jlps/sequence.hpp"

namespace jlps {

/// Parameters (alpha, beta) of the measure (1-x)^alpha (1+x)^beta dx on [-1,1].
struct JacobiParams {
  double alpha = -0.5;
  double beta = -0.5;

  /// Throws DomainError unless alpha > -1 and beta > -1.
  void validate() const;
  /// Hypothesis range of the weighted norm equivalence: alpha, beta >= -1/2.
  bool theorem_scope() const noexcept { return alpha >= -0.5 && beta >= -0.5; }
  /// Total mass 2^{alpha+beta+1} B(alpha+1, beta+1).
  double mass() const;

  friend bool operator==(const JacobiParams&, const JacobiParams&) = default;
};

inline constexpr JacobiParams kChebyshev{-0.5, -0.5};

/// Recurrence coefficients a_n, b_n and normalizations w_n for 0 <= n <= N.
/// Immutable once built.
class CoeffTable {
 public:
  CoeffTable(JacobiParams params, std::size_t max_index);

  const JacobiParams& params() const noexcept { return params_; }
  std::size_t max_index() const noexcept { return a_.size() - 1; }

  double a(std::size_t n) const { return a_.at(n); }
  double b(std::size_t n) const { return b_.at(n); }
  double w(std::size_t n) const { return w_.at(n); }

  std::span<const double> a() const noexcept { return a_; }
  std::span<const double> b() const noexcept { return b_; }
  std::span<const double> w() const noexcept { return w_; }

 private:
  JacobiParams params_;
  std::vector<double> a_, b_, w_;
};

inline CoeffTable build_coeff_table(JacobiParams params, std::size_t max_index) {
  return CoeffTable(params, max_index);
}

/// Orthonormal p_n(x) by forward three-term recurrence from p_0 = w_0.
double eval_poly(const CoeffTable& table, std::size_t n, double x);

/// p_0(x), ..., p_count-1(x) written into out (out.size() >= count).
void eval_polys(const CoeffTable& table, double x, std::span<double> out);

/// J f, or the shifted operator (J - I) f when `shifted` is set. The output
/// holds support + 2 entries.
FiniteSequence apply_jacobi(const CoeffTable& table, const FiniteSequence& f, bool shifted);

/// F(x) = sum_m f(m) p_m(x).
double synthesize(const CoeffTable& table, const FiniteSequence& f, double x);
Complex synthesize(const CoeffTable& table, const ComplexSequence& f, double x);

}  // namespace jlps
