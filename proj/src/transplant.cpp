#include "jlps/transplant.hpp"

#include <algorithm>
#include <cmath>

#include "jlps/errors.hpp"
#include "jlps/quadrature.hpp"
#include "jlps/semigroups.hpp"

namespace jlps {

JacobiParams mixed_params(JacobiParams src, JacobiParams dst) {
  src.validate();
  dst.validate();
  return {(dst.alpha + src.alpha) / 2.0, (dst.beta + src.beta) / 2.0};
}

namespace {

// sum_j omega_j p_n^{dst}(x_j) (sum_m f(m) p_m^{src}(x_j)) for n < L_out on
// an L-point rule of the mixed measure.
FiniteSequence transplant_on_rule(JacobiParams src, JacobiParams dst, const FiniteSequence& f, std::size_t L_out,
                                  std::size_t L) {
  const auto rule = gauss_jacobi_rule(mixed_params(src, dst), L);
  const std::size_t top = static_cast<std::size_t>(std::max<std::ptrdiff_t>(f.support() + 1, 1));
  const CoeffTable cs(src, top), cd(dst, std::max<std::size_t>(L_out, 1));
  std::vector<double> ps(top), pd(L_out);
  FiniteSequence out(L_out);
  for (std::size_t j = 0; j < L; ++j) {
    eval_polys(cs, rule.nodes[j], ps);
    double F = 0.0;
    for (std::size_t m = 0; m < top; ++m) F += f[m] * ps[m];
    const double c = rule.weights[j] * F;
    if (L_out == 0) break;
    eval_polys(cd, rule.nodes[j], pd);
    for (std::size_t n = 0; n < L_out; ++n) out[n] += c * pd[n];
  }
  return out;
}

std::size_t exact_rule_size(std::size_t deg) { return deg / 2 + 17; }

}  // namespace

double transplantation_kernel(JacobiParams src, JacobiParams dst, std::size_t n, std::size_t m, std::size_t L) {
  if (L == 0) L = exact_rule_size(n + m);
  const auto f = FiniteSequence::unit(m);
  const double a = transplant_on_rule(src, dst, f, n + 1, L)[n];
  const double b = transplant_on_rule(src, dst, f, n + 1, 2 * L)[n];
  if (std::abs(a - b) >= 1e-10) throw ConvergenceError("transplantation kernel unstable under rule doubling", std::abs(a - b));
  return b;
}

TransplantResult apply_transplantation(JacobiParams src, JacobiParams dst, const FiniteSequence& f,
                                       std::size_t L_out) {
  const std::size_t deg = static_cast<std::size_t>(std::max<std::ptrdiff_t>(f.support(), 0)) + L_out;
  const std::size_t L = exact_rule_size(deg);
  TransplantResult r;
  const auto a = transplant_on_rule(src, dst, f, L_out, L);
  r.values = transplant_on_rule(src, dst, f, L_out, 2 * L);
  r.change = max_abs_diff(a, r.values);
  r.stable = r.change < 1e-8;
  r.rule_size = 2 * L;
  return r;
}

CompositionReport composition_check(JacobiParams params, const FiniteSequence& f, int k,
                                    const std::vector<double>& t_grid, std::size_t n_out, double target,
                                    std::size_t max_truncation) {
  params.validate();
  if (t_grid.empty()) throw DomainError("composition_check needs at least one time");
  const std::size_t support = static_cast<std::size_t>(std::max<std::ptrdiff_t>(f.support(), 0));
  // Direct side on a model comfortably larger than every index involved.
  const auto direct_model = cached_model(params, initial_rule_size(n_out + support + 32));
  std::vector<FiniteSequence> direct;
  for (double t : t_grid) direct.push_back(apply_semigroup(*direct_model, f, t, SemigroupKind::heat, k));

  CompositionReport rep;
  std::size_t N = 4 * (support + 1) + 64;
  while (true) {
    const auto h = apply_transplantation(params, kChebyshev, f, N).values;
    const auto cheb = cached_model(kChebyshev, N + 64);
    double disc = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      auto u = apply_semigroup(*cheb, h, t_grid[i], SemigroupKind::heat, k);
      u.resize(N);
      const auto back = apply_transplantation(kChebyshev, params, u, n_out).values;
      for (std::size_t n = 0; n < n_out; ++n) disc = std::max(disc, std::abs(back[n] - direct[i][n]));
    }
    if (!rep.levels.empty() && disc > rep.levels.back().discrepancy) rep.monotone = false;
    rep.levels.push_back({N, disc});
    rep.final_discrepancy = disc;
    if (disc < target || 2 * N > max_truncation) break;
    N *= 2;
  }
  return rep;
}

}  // namespace jlps
