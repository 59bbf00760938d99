#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jlps/bessel.hpp"
#include "jlps/quadrature.hpp"
#include "jlps/sequence.hpp"

namespace jlps {

struct HeatKernelQuery {
  double t = 0.0;
  std::size_t m = 0;
  std::size_t n = 0;
  int k = 0;  ///< t-derivative order
};

enum class SemigroupKind { heat, poisson };

/// Per-node symbol of the evolution: (-lambda)^k e^{-t lambda} for the heat
/// semigroup, (-sqrt(lambda))^k e^{-t sqrt(lambda)} for the Poisson one.
std::vector<double> evolution_symbol(const SpectralModel& model, double t, SemigroupKind kind, int k);

/// sum_j w_j (-lambda_j)^k e^{-t lambda_j} p_m(x_j) p_n(x_j): the k-th
/// t-derivative of the discretized heat kernel.
double heat_kernel(const SpectralModel& model, const HeatKernelQuery& q);

/// Closed form for (alpha, beta) = (-1/2, -1/2):
///   W_t(0,0) = e^{-t} I_0(t), W_t(m,0) = sqrt(2) e^{-t} I_m(t) (m >= 1),
///   W_t(m,n) = e^{-t} (I_{m+n}(t) + I_{n-m}(t)) (m, n >= 1).
/// The sqrt(2) comes from p_0 = 1/sqrt(pi) against p_m = sqrt(2/pi) cos(m theta).
double chebyshev_heat_kernel(double t, std::size_t m, std::size_t n);
double chebyshev_heat_kernel(const BesselScaledTable& tab, std::size_t m, std::size_t n);

/// d/dt K_t(n) for K_t(n) = e^{-t} I_n(t), from 2 I_n' = I_{n+1} + I_{n-1}:
/// (K(n+1) - 2K(n) + K(n-1)) / 2, which at n = 0 reads K(1) - K(0).
double heat_deriv_recurrence(const BesselScaledTable& tab, std::size_t n);

/// d/dt W_t(m,n) in the Chebyshev case, assembled from heat_deriv_recurrence.
double chebyshev_heat_kernel_dt(const BesselScaledTable& tab, std::size_t m, std::size_t n);

enum class PoissonPath { direct, subordination };

/// Quadrature for P_t = pi^{-1/2} int_0^inf e^{-u} u^{-1/2} W_{t^2/(4u)} du:
/// trapezoid in s = log(u / u*), u* = t^2/4, step halved until the factors
/// sum_i omega_i e^{-lambda t^2/(4 u_i)} are self-consistent.
struct SubordinationRule {
  double t = 0.0;
  std::vector<double> heat_times;  ///< t^2 / (4 u_i)
  std::vector<double> weights;     ///< omega_i
  double step = 0.0;
  double error_estimate = 0.0;

  /// sum_i omega_i e^{-lambda heat_times_i}; approximates e^{-t sqrt(lambda)}.
  double factor(double lambda) const;
};

SubordinationRule subordination_rule(double t, std::span<const double> lambdas, double tol = 1e-12);

double poisson_kernel(const SpectralModel& model, double t, std::size_t m, std::size_t n, PoissonPath via);

/// Poisson kernel matrix on 0 <= m, n < size through the subordination rule
/// applied to the heat kernels W_{t^2/(4u_i)} of the model.
std::vector<double> subordinated_poisson_matrix(const SpectralModel& model, double t, std::size_t size);

/// Kernel matrix K[m*size + n] = sum_j w_j symbol_j p_m(x_j) p_n(x_j).
std::vector<double> kernel_matrix(const SpectralModel& model, std::span<const double> symbol, std::size_t size);

/// The kernel action sum_m f(m) K(m, n) for 0 <= n < L; for the heat kind
/// with k >= 1 this is d^k/dt^k W_t f.
FiniteSequence apply_semigroup(const SpectralModel& model, const FiniteSequence& f, double t, SemigroupKind kind,
                               int k = 0);

struct KernelGridRow {
  double t;
  std::size_t m, n;
  double value;
  std::string path;
};

void write_kernel_grid_csv(std::ostream& os, std::span<const KernelGridRow> rows);

}  // namespace jlps
