#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <span>
#include <vector>

#include "jlps/errors.hpp"
#include "jlps/jacobi.hpp"
#include "jlps/sequence.hpp"

namespace jlps {

/// L-point Gauss rule for d mu_{alpha,beta}: ascending nodes in (-1,1),
/// positive weights.
struct QuadratureRule {
  JacobiParams params;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Golub-Welsch: nodes are the eigenvalues of the L x L truncated Jacobi
/// matrix; weights come from the Christoffel function 1 / sum_m p_m(x_j)^2.
QuadratureRule gauss_jacobi_rule(JacobiParams params, std::size_t L);

/// sum_j w_j g(x_j).
double integrate(const QuadratureRule& rule, const std::function<double(double)>& g);

void write_rule_csv(std::ostream& os, const QuadratureRule& rule);

/// Eigendecomposition of the truncated shifted operator: spectral points
/// lambda_j = 1 - x_j and the basis P[m][j] = p_m(x_j), 0 <= m, j < L.
/// Immutable; safe for concurrent reads.
class SpectralModel {
 public:
  SpectralModel(JacobiParams params, std::size_t L);

  const JacobiParams& params() const noexcept { return rule_.params; }
  const QuadratureRule& rule() const noexcept { return rule_; }
  const CoeffTable& coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return rule_.size(); }

  std::span<const double> nodes() const noexcept { return rule_.nodes; }
  std::span<const double> weights() const noexcept { return rule_.weights; }
  std::span<const double> lambdas() const noexcept { return lambdas_; }
  /// sqrt(lambda_j), the spectral points of the Poisson generator.
  std::span<const double> sqrt_lambdas() const noexcept { return sqrt_lambdas_; }

  /// Row m of the basis: p_m(x_0), ..., p_m(x_{L-1}).
  std::span<const double> basis_row(std::size_t m) const {
    if (m >= size()) throw IndexError("basis row out of range");
    return {basis_.data() + m * size(), size()};
  }
  double basis(std::size_t m, std::size_t j) const noexcept { return basis_[m * size() + j]; }

  /// F(x_j) = sum_m f(m) p_m(x_j) for every node.
  std::vector<double> synthesize_at_nodes(const FiniteSequence& f) const;
  std::vector<Complex> synthesize_at_nodes(const ComplexSequence& f) const;

  /// Coefficients c_n = sum_j w_j phi_j p_n(x_j) for 0 <= n < L.
  FiniteSequence analyze(std::span<const double> phi) const;
  ComplexSequence analyze(std::span<const Complex> phi) const;

  /// Throws IndexError unless the sequence fits in the model.
  void require_support(std::ptrdiff_t support, const char* what) const;

 private:
  QuadratureRule rule_;
  CoeffTable coeffs_;
  std::vector<double> lambdas_, sqrt_lambdas_;
  std::vector<double> basis_;
};

std::shared_ptr<const SpectralModel> build_spectral_model(JacobiParams params, std::size_t L);

/// Process-wide memo of built models keyed by (alpha, beta, L).
std::shared_ptr<const SpectralModel> cached_model(JacobiParams params, std::size_t L);
void clear_model_cache();

/// Initial rule size for computations touching indices up to max_index.
inline std::size_t initial_rule_size(std::size_t max_index) {
  return std::max<std::size_t>(2 * max_index + 16, 64);
}

struct ConvergedScalar {
  double value = 0.0;
  std::size_t L = 0;
  double relative_change = 0.0;
};

/// Doubles L from L_init until eval(model) moves by less than
/// tol * max(|value|, abs_floor), capped at L_max.
template <class Eval>
ConvergedScalar converge_in_L(JacobiParams params, std::size_t L_init, std::size_t L_max, double tol, Eval eval,
                              double abs_floor = 1e-300) {
  std::size_t L = L_init;
  double prev = eval(*cached_model(params, L));
  double change = INFINITY;
  while (L * 2 <= L_max) {
    L *= 2;
    const double cur = eval(*cached_model(params, L));
    change = std::abs(cur - prev) / std::max(std::abs(cur), abs_floor);
    prev = cur;
    if (change < tol) return {cur, L, change};
  }
  throw ConvergenceError("rule-size doubling did not reach tolerance by L=" + std::to_string(L), change);
}

}  // namespace jlps
