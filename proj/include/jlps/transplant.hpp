#pragma once

#include <cstddef>
#include <vector>

#include "jlps/jacobi.hpp"
#include "jlps/sequence.hpp"

namespace jlps {

/// Parameters of the mixed measure mu_{(gamma+alpha)/2, (delta+beta)/2}.
JacobiParams mixed_params(JacobiParams src, JacobiParams dst);

/// int p_n^{dst} p_m^{src} d mu_mixed by the Gauss rule of the mixed measure
/// with L nodes, checked against 2L nodes to 1e-10 (ConvergenceError
/// otherwise). L = 0 picks a size exact for the polynomial degree.
double transplantation_kernel(JacobiParams src, JacobiParams dst, std::size_t n, std::size_t m, std::size_t L = 0);

struct TransplantResult {
  FiniteSequence values;  ///< L_out entries
  bool stable = false;    ///< kept entries moved < 1e-8 under rule doubling
  double change = 0.0;
  std::size_t rule_size = 0;
};

/// (T f)(n) = sum_m f(m) K(n, m) for n < L_out.
TransplantResult apply_transplantation(JacobiParams src, JacobiParams dst, const FiniteSequence& f,
                                       std::size_t L_out);

struct CompositionLevel {
  std::size_t truncation;  ///< length kept of the intermediate Chebyshev sequence
  double discrepancy;      ///< max over n, t of |direct - composed|
};

struct CompositionReport {
  std::vector<CompositionLevel> levels;
  double final_discrepancy = 0.0;
  bool monotone = true;
};

/// Compares d_t^k W_t f(n), n < n_out, with the route through the
/// Chebyshev case: transplant to (-1/2,-1/2), evolve there, transplant back.
/// Doubles the intermediate truncation until the discrepancy drops below
/// target or max_truncation is reached.
CompositionReport composition_check(JacobiParams params, const FiniteSequence& f, int k,
                                    const std::vector<double>& t_grid, std::size_t n_out = 16,
                                    double target = 1e-10, std::size_t max_truncation = 4096);

}  // namespace jlps
