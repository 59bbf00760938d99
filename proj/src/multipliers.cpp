#include "jlps/multipliers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "jlps/errors.hpp"
#include "jlps/littlewood_paley.hpp"
#include "jlps/semigroups.hpp"

namespace jlps {

using namespace std::complex_literals;

Complex complex_gamma(Complex z) {
  static constexpr std::array<double, 9> p{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                           771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                           -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * z) * complex_gamma(1.0 - z));
  z -= 1.0;
  Complex x = p[0];
  for (std::size_t i = 1; i < p.size(); ++i) x += p[i] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

Density density_one() {
  return {"one", 1.0, [](double) { return Complex(1.0); }, {}, [](double) { return Complex(1.0); }};
}

Density density_exp() {
  return {"exp", 1.0, [](double t) { return Complex(std::exp(-t)); }, {},
          [](double x) { return Complex(x / (1.0 + x)); }};
}

Density density_step(double t0) {
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("step density needs t0 > 0");
  return {"step",
          1.0,
          [t0](double t) { return Complex(t < t0 ? 1.0 : 0.0); },
          {t0},
          [t0](double x) { return Complex(-std::expm1(-x * t0)); }};
}

Density density_steps(std::vector<double> edges, std::vector<double> values) {
  if (edges.size() != values.size() + 1 || edges.empty() || edges.front() != 0.0)
    throw DomainError("step density needs edges 0 = e_0 < ... < e_K and K values");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (!(edges[i + 1] > edges[i])) throw DomainError("step density edges must increase");
  double sup = 0.0;
  for (double v : values) sup = std::max(sup, std::abs(v));
  Density d;
  d.name = "steps";
  d.sup_bound = sup;
  d.breakpoints.assign(edges.begin() + 1, edges.end());
  d.a = [edges, values](double t) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), t);
    const auto i = static_cast<std::size_t>(it - edges.begin());
    return Complex(i == 0 || i > values.size() ? 0.0 : values[i - 1]);
  };
  d.exact = [edges, values](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * (std::exp(-x * edges[i]) - std::exp(-x * edges[i + 1]));
    return Complex(s);
  };
  return d;
}

Density density_power(double gamma) {
  if (!std::isfinite(gamma)) throw DomainError("power density needs a finite gamma");
  const Complex inv = 1.0 / complex_gamma(Complex(1.0, -gamma));
  return {"power", std::abs(inv), [gamma, inv](double t) { return inv * std::exp(-1i * gamma * std::log(t)); }, {},
          [gamma](double x) { return std::exp(1i * gamma * std::log(x)); }};
}

Density density_by_name(const std::string& name, double param) {
  if (name == "one") return density_one();
  if (name == "exp") return density_exp();
  if (name == "step") return density_step(param);
  if (name == "power") return density_power(param);
  throw DomainError("unknown density '" + name + "' (expected one, exp, step, power)");
}

const char* symbol_kind_name(SymbolKind k) noexcept {
  switch (k) {
    case SymbolKind::tabulated: return "tabulated";
    case SymbolKind::laplace_type: return "laplace_type";
    case SymbolKind::imaginary_power: return "imaginary_power";
  }
  return "?";
}

MultiplierSymbol MultiplierSymbol::tabulated(std::function<Complex(double)> M) {
  MultiplierSymbol s;
  s.kind = SymbolKind::tabulated;
  s.M = std::move(M);
  return s;
}

MultiplierSymbol MultiplierSymbol::laplace(Density d) {
  MultiplierSymbol s;
  s.kind = SymbolKind::laplace_type;
  if (d.exact)
    s.M = d.exact;
  else
    s.M = [d](double x) { return laplace_symbol(d, x); };
  s.density = std::move(d);
  return s;
}

MultiplierSymbol MultiplierSymbol::imaginary_power(double gamma) {
  MultiplierSymbol s = laplace(density_power(gamma));
  s.kind = SymbolKind::imaginary_power;
  s.gamma = gamma;
  return s;
}

namespace {

// Composite 20-point Gauss-Legendre nodes on [lo, hi] cut at the given
// points, `per_unit` panels per unit length (at least one per piece).
struct PanelRule {
  std::vector<double> nodes, weights;
};

PanelRule panel_rule(double lo, double hi, std::vector<double> cuts, double per_unit) {
  static const QuadratureRule gl = gauss_jacobi_rule({0.0, 0.0}, 20);
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return !(c > lo && c < hi); }), cuts.end());
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  PanelRule r;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) * per_unit)));
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = a + h * (static_cast<double>(p) + 0.5);
      for (std::size_t q = 0; q < gl.size(); ++q) {
        r.nodes.push_back(mid + 0.5 * h * gl.nodes[q]);
        r.weights.push_back(0.5 * h * gl.weights[q]);
      }
    }
  }
  return r;
}

std::vector<double> log_cuts(const std::vector<double>& breakpoints) {
  std::vector<double> out;
  for (double b : breakpoints)
    if (b > 0.0) out.push_back(std::log(b));
  return out;
}

constexpr int kMaxLevels = 8;

}  // namespace

Complex laplace_symbol(const Density& a, double x, double rel_tol) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("laplace_symbol needs x > 0");
  // Below sigma_lo the integrand is bounded by x e^sigma ||a||; above
  // sigma_hi, e^{-x e^sigma} underflows.
  const double lo = std::log(1e-20 / x), hi = std::log(800.0 / x);
  const auto cuts = log_cuts(a.breakpoints);
  Complex prev = NAN;
  double change = INFINITY;
  for (int level = 0; level < kMaxLevels; ++level) {
    const auto rule = panel_rule(lo, hi, cuts, std::ldexp(1.0, level));
    Complex sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = std::exp(rule.nodes[i]);
      sum += rule.weights[i] * x * t * std::exp(-x * t) * a.a(t);
    }
    if (level > 0) {
      change = std::abs(sum - prev);
      if (change <= rel_tol * std::max(std::abs(sum), 1e-300) || change < 1e-16 * a.sup_bound) return sum;
    }
    prev = sum;
  }
  throw ConvergenceError("laplace_symbol panel doubling did not converge", change);
}

std::vector<Complex> multiplier_node_values(const SpectralModel& model, const MultiplierSymbol& sym,
                                            const FiniteSequence& f) {
  auto F = model.synthesize_at_nodes(to_complex(f));
  const auto lam = model.lambdas();
  for (std::size_t j = 0; j < F.size(); ++j) {
    const Complex m = sym.M(lam[j]);
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
      throw NumericalFault("multiplier symbol is not finite at lambda = " + std::to_string(lam[j]));
    F[j] *= m;
  }
  return F;
}

MultiplierOutput apply_multiplier(const SpectralModel& model, const MultiplierSymbol& sym, const FiniteSequence& f) {
  const auto phi = multiplier_node_values(model, sym, f);
  MultiplierOutput out;
  out.values = model.analyze(std::span<const Complex>(phi));
  const std::size_t L = out.values.size();
  double peak = 0.0, edge = 0.0;
  for (std::size_t n = 0; n < L; ++n) {
    peak = std::max(peak, std::abs(out.values[n]));
    if (n >= L - L / 8) edge = std::max(edge, std::abs(out.values[n]));
  }
  out.truncated = edge > 1e-12 * peak;
  return out;
}

ComplexSequence laplace_multiplier_heatpath(const SpectralModel& model, const Density& a, const FiniteSequence& f,
                                            double rel_tol) {
  model.require_support(f.support(), "laplace_multiplier_heatpath");
  const auto lam = model.lambdas();
  const auto [lam_min, lam_max] = std::minmax_element(lam.begin(), lam.end());
  const double lo = std::log(1e-20 / *lam_max), hi = std::log(800.0 / *lam_min);
  const auto cuts = log_cuts(a.breakpoints);
  const std::size_t L = model.size();
  ComplexSequence prev;
  double change = INFINITY;
  for (int level = 0; level < kMaxLevels; ++level) {
    const auto rule = panel_rule(lo, hi, cuts, std::ldexp(1.0, level));
    std::vector<double> re(L, 0.0), im(L, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = std::exp(rule.nodes[i]);
      const Complex c = -a.a(s) * s * rule.weights[i];
      if (c == 0.0) continue;
      const auto d = apply_semigroup(model, f, s, SemigroupKind::heat, 1);
      for (std::size_t n = 0; n < L; ++n) {
        re[n] += c.real() * d[n];
        im[n] += c.imag() * d[n];
      }
    }
    ComplexSequence cur(L);
    double scale = 0.0;
    for (std::size_t n = 0; n < L; ++n) {
      cur[n] = Complex(re[n], im[n]);
      scale = std::max(scale, std::abs(cur[n]));
    }
    if (level > 0) {
      change = max_abs_diff(cur, prev);
      if (change <= rel_tol * std::max(scale, 1e-300)) return cur;
    }
    prev = std::move(cur);
  }
  throw ConvergenceError("heat-path s-quadrature did not converge", change);
}

MultiplierBoundReport gk_multiplier_bound_check(std::shared_ptr<const SpectralModel> model,
                                                const MultiplierSymbol& sym,
                                                const std::vector<FiniteSequence>& ensemble) {
  if (ensemble.empty()) throw DomainError("gk_multiplier_bound_check: empty ensemble");
  const auto g1 = cached_evaluator(model, SemigroupKind::heat, 1);
  const auto g2 = cached_evaluator(model, SemigroupKind::heat, 2);
  MultiplierBoundReport rep;
  for (const auto& f : ensemble) {
    const auto phi = multiplier_node_values(*model, sym, f);
    const auto a = g1->values_at_nodes(std::span<const Complex>(phi));
    const auto b = g2->values(f);
    double best = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
      ++rep.pairs;
      if (b[n] == 0.0) {
        if (a[n] == 0.0)
          ++rep.skipped_zero;
        else
          ++rep.hard_failures;
        continue;
      }
      best = std::max(best, a[n] / b[n]);
    }
    rep.per_sequence.push_back(best);
    rep.R = std::max(rep.R, best);
  }
  return rep;
}

MarcinkiewiczReport marcinkiewicz_check(const MultiplierSymbol& sym, int kmax, std::size_t grid_points) {
  if (kmax < 0 || kmax > 4) throw DomainError("marcinkiewicz_check supports 0 <= kmax <= 4");
  if (grid_points < 2) throw DomainError("marcinkiewicz_check needs at least 2 grid points");
  MarcinkiewiczReport rep;
  rep.constants.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  const double lo = std::log(1e-6), hi = std::log(1.9);
  // Central k-th difference with half-step offsets for odd k; error O(h^2).
  auto diff = [&](double x, int k, double h) {
    Complex s = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= k; ++i) {
      s += (i % 2 ? -binom : binom) * sym.M(x + (0.5 * k - i) * h);
      binom = binom * (k - i) / (i + 1);
    }
    return s / std::pow(h, k);
  };
  for (std::size_t g = 0; g < grid_points; ++g) {
    const double x = std::exp(lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid_points - 1));
    rep.grid.push_back(x);
    rep.constants[0] = std::max(rep.constants[0], std::abs(sym.M(x)));
    for (int k = 1; k <= kmax; ++k) {
      const double h = 0.01 * x;
      const Complex d = (4.0 * diff(x, k, 0.5 * h) - diff(x, k, h)) / 3.0;
      rep.constants[k] = std::max(rep.constants[k], std::pow(x, k) * std::abs(d));
    }
  }
  return rep;
}

}  // namespace jlps
