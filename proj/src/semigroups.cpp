#include "jlps/semigroups.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "jlps/errors.hpp"
#include "jlps/simd.hpp"

namespace jlps {

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("semigroup time must be finite and >= 0");
}

void check_index(const SpectralModel& model, std::size_t m, std::size_t n) {
  if (m >= model.size() || n >= model.size())
    throw IndexError("kernel index (" + std::to_string(m) + ", " + std::to_string(n) + ") outside model of size " +
                     std::to_string(model.size()));
}

}  // namespace

std::vector<double> evolution_symbol(const SpectralModel& model, double t, SemigroupKind kind, int k) {
  check_time(t);
  if (k < 0) throw DomainError("derivative order must be >= 0");
  const auto mu = kind == SemigroupKind::heat ? model.lambdas() : model.sqrt_lambdas();
  std::vector<double> out(mu.size());
  for (std::size_t j = 0; j < mu.size(); ++j) {
    double v = std::exp(-t * mu[j]);
    for (int i = 0; i < k; ++i) v *= -mu[j];
    out[j] = v;
  }
  return out;
}

double heat_kernel(const SpectralModel& model, const HeatKernelQuery& q) {
  check_index(model, q.m, q.n);
  const auto symbol = evolution_symbol(model, q.t, SemigroupKind::heat, q.k);
  std::vector<double> c(symbol.size());
  simd::kernels().hadamard(symbol.data(), model.weights().data(), c.data(), c.size());
  return simd::dot3(c, model.basis_row(q.m), model.basis_row(q.n));
}

double chebyshev_heat_kernel(const BesselScaledTable& tab, std::size_t m, std::size_t n) {
  if (m > n) std::swap(m, n);
  if (m == 0) return n == 0 ? tab(0) : std::numbers::sqrt2 * tab(static_cast<long>(n));
  return tab(static_cast<long>(m + n)) + tab(static_cast<long>(n - m));
}

double chebyshev_heat_kernel(double t, std::size_t m, std::size_t n) {
  check_time(t);
  return chebyshev_heat_kernel(BesselScaledTable(t, m + n), m, n);
}

double heat_deriv_recurrence(const BesselScaledTable& tab, std::size_t n) {
  if (n + 1 > tab.max_order()) throw IndexError("heat_deriv_recurrence: order n+1 outside the Bessel table");
  const long i = static_cast<long>(n);
  if (n == 0) return tab(1) - tab(0);
  return 0.5 * (tab(i + 1) - 2.0 * tab(i) + tab(i - 1));
}

double chebyshev_heat_kernel_dt(const BesselScaledTable& tab, std::size_t m, std::size_t n) {
  if (m > n) std::swap(m, n);
  if (m == 0) return n == 0 ? heat_deriv_recurrence(tab, 0) : std::numbers::sqrt2 * heat_deriv_recurrence(tab, n);
  return heat_deriv_recurrence(tab, m + n) + heat_deriv_recurrence(tab, n - m);
}

double SubordinationRule::factor(double lambda) const {
  if (t == 0.0) return 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * std::exp(-lambda * heat_times[i]);
  return s;
}

namespace {

SubordinationRule trapezoid_rule(double t, double h) {
  SubordinationRule r;
  r.t = t;
  r.step = h;
  const double u_star = t * t / 4.0;
  // e^{-u} u^{1/2} is below 1e-24 past u = 60; u^{1/2} is below 1e-14 under 1e-28.
  const double s_lo = std::log(1e-28 / u_star);
  const double s_hi = std::log(60.0 / u_star);
  const auto count = static_cast<std::size_t>(std::ceil((s_hi - s_lo) / h));
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (std::size_t i = 0; i <= count; ++i) {
    const double s = s_lo + h * static_cast<double>(i);
    const double u = u_star * std::exp(s);
    // du = u ds, so u^{-1/2} du = u^{1/2} ds.
    const double w = h * inv_sqrt_pi * std::exp(-u) * std::sqrt(u);
    if (w == 0.0) continue;
    r.weights.push_back(w);
    r.heat_times.push_back(t * t / (4.0 * u));
  }
  return r;
}

}  // namespace

SubordinationRule subordination_rule(double t, std::span<const double> lambdas, double tol) {
  check_time(t);
  if (t == 0.0) {
    SubordinationRule r;
    r.t = 0.0;
    return r;
  }
  double h = 0.5;
  SubordinationRule coarse = trapezoid_rule(t, h);
  for (int level = 0; level < 10; ++level) {
    h /= 2.0;
    SubordinationRule fine = trapezoid_rule(t, h);
    double err = 0.0;
    for (double lam : lambdas) err = std::max(err, std::abs(fine.factor(lam) - coarse.factor(lam)));
    fine.error_estimate = err;
    if (err < tol) return fine;
    coarse = std::move(fine);
  }
  throw ConvergenceError("subordination u-quadrature did not converge", coarse.error_estimate);
}

double poisson_kernel(const SpectralModel& model, double t, std::size_t m, std::size_t n, PoissonPath via) {
  check_index(model, m, n);
  check_time(t);
  std::vector<double> c(model.size());
  if (via == PoissonPath::direct) {
    c = evolution_symbol(model, t, SemigroupKind::poisson, 0);
  } else {
    const auto rule = subordination_rule(t, model.lambdas());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = rule.factor(model.lambdas()[j]);
  }
  simd::kernels().hadamard(c.data(), model.weights().data(), c.data(), c.size());
  return simd::dot3(c, model.basis_row(m), model.basis_row(n));
}

std::vector<double> kernel_matrix(const SpectralModel& model, std::span<const double> symbol, std::size_t size) {
  if (size > model.size()) throw IndexError("kernel_matrix: requested block larger than the model");
  if (symbol.size() != model.size()) throw IndexError("kernel_matrix: symbol length mismatch");
  std::vector<double> c(model.size());
  simd::kernels().hadamard(symbol.data(), model.weights().data(), c.data(), c.size());
  std::vector<double> K(size * size);
  for (std::size_t m = 0; m < size; ++m)
    for (std::size_t n = m; n < size; ++n) {
      const double v = simd::dot3(c, model.basis_row(m), model.basis_row(n));
      K[m * size + n] = v;
      K[n * size + m] = v;
    }
  return K;
}

std::vector<double> subordinated_poisson_matrix(const SpectralModel& model, double t, std::size_t size) {
  const auto rule = subordination_rule(t, model.lambdas());
  // sum_i omega_i W_{s_i}(m, n) = sum_j w_j [sum_i omega_i e^{-lambda_j s_i}] p_m p_n
  std::vector<double> symbol(model.size());
  for (std::size_t j = 0; j < symbol.size(); ++j) symbol[j] = rule.factor(model.lambdas()[j]);
  return kernel_matrix(model, symbol, size);
}

FiniteSequence apply_semigroup(const SpectralModel& model, const FiniteSequence& f, double t, SemigroupKind kind,
                               int k) {
  model.require_support(f.support(), "apply_semigroup");
  auto phi = model.synthesize_at_nodes(f);
  const auto symbol = evolution_symbol(model, t, kind, k);
  for (std::size_t j = 0; j < phi.size(); ++j) phi[j] *= symbol[j];
  return model.analyze(std::span<const double>(phi));
}

void write_kernel_grid_csv(std::ostream& os, std::span<const KernelGridRow> rows) {
  os << "t,m,n,value,path\n";
  os.precision(17);
  for (const auto& r : rows) os << r.t << ',' << r.m << ',' << r.n << ',' << r.value << ',' << r.path << '\n';
}

}  // namespace jlps
