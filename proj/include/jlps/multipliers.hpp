#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jlps/quadrature.hpp"
#include "jlps/sequence.hpp"

namespace jlps {

/// Bounded density a(t) on (0, inf) for a Laplace-type symbol
/// M(x) = x int_0^inf e^{-xt} a(t) dt.
struct Density {
  std::string name;
  double sup_bound = 1.0;                ///< declared ||a||_inf
  std::function<Complex(double)> a;      ///< must be reentrant
  std::vector<double> breakpoints;       ///< discontinuities of a, ascending
  std::function<Complex(double)> exact;  ///< optional closed form of M
};

Density density_one();
Density density_exp();
/// a = 1 on (0, t0), 0 after: M(x) = 1 - e^{-x t0}.
Density density_step(double t0);
/// Piecewise constant: a = values[i] on [edges[i], edges[i+1]), edges[0] = 0,
/// and a = 0 past the last edge.
Density density_steps(std::vector<double> edges, std::vector<double> values);
/// a(t) = t^{-i gamma} / Gamma(1 - i gamma): M(x) = x^{i gamma}.
Density density_power(double gamma);

/// Built-in densities by name: "one", "exp", "step" (param t0), "power" (param gamma).
Density density_by_name(const std::string& name, double param);

enum class SymbolKind { tabulated, laplace_type, imaginary_power };

const char* symbol_kind_name(SymbolKind k) noexcept;

struct MultiplierSymbol {
  SymbolKind kind = SymbolKind::tabulated;
  std::function<Complex(double)> M;
  std::optional<Density> density;
  std::optional<double> gamma;

  static MultiplierSymbol tabulated(std::function<Complex(double)> M);
  /// Uses the density's closed form when present, laplace_symbol otherwise.
  static MultiplierSymbol laplace(Density d);
  static MultiplierSymbol imaginary_power(double gamma);
};

/// Lanczos approximation (g = 7, 9 terms), reflection for Re z < 1/2.
Complex complex_gamma(Complex z);

/// M(x) = x int_0^inf e^{-xt} a(t) dt in the variable sigma = log t, split at
/// the density breakpoints, panel count doubled until the relative change
/// is below rel_tol.
Complex laplace_symbol(const Density& a, double x, double rel_tol = 1e-12);

struct MultiplierOutput {
  ComplexSequence values;  ///< L entries; entries n >= L are dropped
  bool truncated = false;  ///< output still carries mass near n = L
};

/// g(n) = sum_j w_j M(lambda_j) F(x_j) p_n(x_j).
MultiplierOutput apply_multiplier(const SpectralModel& model, const MultiplierSymbol& sym, const FiniteSequence& f);

/// Spectral multiplier node values M(lambda_j) F(x_j).
std::vector<Complex> multiplier_node_values(const SpectralModel& model, const MultiplierSymbol& sym,
                                            const FiniteSequence& f);

/// T_M f = -int_0^inf a(s) d_s W_s f ds, with d_s W_s f computed by
/// apply_semigroup at every s-node.
ComplexSequence laplace_multiplier_heatpath(const SpectralModel& model, const Density& a, const FiniteSequence& f,
                                            double rel_tol = 1e-11);

struct MultiplierBoundReport {
  double R = 0.0;  ///< max over f, n of g_1(T_M f)(n) / g_2(f)(n)
  std::vector<double> per_sequence;
  std::size_t pairs = 0;
  std::size_t skipped_zero = 0;
  std::size_t hard_failures = 0;  ///< g_2 = 0 < g_1
};

MultiplierBoundReport gk_multiplier_bound_check(std::shared_ptr<const SpectralModel> model,
                                                const MultiplierSymbol& sym,
                                                const std::vector<FiniteSequence>& ensemble);

struct MarcinkiewiczReport {
  std::vector<double> constants;  ///< sup_x |x^k M^(k)(x)| for k = 0..kmax
  std::vector<double> grid;
};

MarcinkiewiczReport marcinkiewicz_check(const MultiplierSymbol& sym, int kmax, std::size_t grid_points = 200);

}  // namespace jlps
