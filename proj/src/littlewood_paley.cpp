#include "jlps/littlewood_paley.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <tuple>

#include "jlps/errors.hpp"
#include "jlps/simd.hpp"

namespace jlps {

namespace bmq = boost::math::quadrature;

void BkSpace::validate() const {
  if (k < 1) throw DomainError("B_k order must be >= 1");
}

const char* method_name(GkMethod m) noexcept {
  return m == GkMethod::closed_form ? "closed_form" : "numeric_t_integration";
}

GkEvaluator::GkEvaluator(std::shared_ptr<const SpectralModel> model, SemigroupKind kind, int k)
    : model_(std::move(model)), kind_(kind), k_(k) {
  BkSpace{k}.validate();
  const std::size_t L = model_->size();
  const auto mu = kind == SemigroupKind::heat ? model_->lambdas() : model_->sqrt_lambdas();
  const double scale = std::tgamma(2.0 * k);
  H_.resize(L * L);
  const auto& ker = simd::kernels();
  for (std::size_t j = 0; j < L; ++j) ker.cauchy_row(mu[j], mu.data(), L, k, scale, H_.data() + j * L);
}

double GkEvaluator::norm(std::span<const double> v) const { return std::sqrt(std::max(0.0, bilinear(v, v))); }

double GkEvaluator::bilinear(std::span<const double> v, std::span<const double> u) const {
  const std::size_t L = model_->size();
  if (v.size() != L || u.size() != L) throw IndexError("GkEvaluator: vector length differs from the model size");
  const auto& ker = simd::kernels();
  std::vector<double> y(L);
  for (std::size_t r = 0; r < L; ++r) y[r] = ker.dot_compensated(H_.data() + r * L, u.data(), L);
  return ker.dot_compensated(v.data(), y.data(), L);
}

double GkEvaluator::value(std::span<const double> F, std::size_t n) const {
  const std::size_t L = model_->size();
  if (F.size() != L) throw IndexError("GkEvaluator: node values have wrong length");
  std::vector<double> v(L);
  const auto row = model_->basis_row(n);
  const auto w = model_->weights();
  for (std::size_t j = 0; j < L; ++j) v[j] = w[j] * F[j] * row[j];
  return norm(v);
}

std::vector<double> GkEvaluator::values(const FiniteSequence& f) const {
  return values_at_nodes(std::span<const double>(model_->synthesize_at_nodes(f)));
}

std::vector<double> GkEvaluator::values_at_nodes(std::span<const Complex> F) const {
  std::vector<double> re(F.size()), im(F.size());
  for (std::size_t j = 0; j < F.size(); ++j) {
    re[j] = F[j].real();
    im[j] = F[j].imag();
  }
  auto a = values_at_nodes(std::span<const double>(re));
  const auto b = values_at_nodes(std::span<const double>(im));
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = std::hypot(a[n], b[n]);
  return a;
}

std::vector<double> GkEvaluator::values_at_nodes(std::span<const double> F) const {
  const std::size_t L = model_->size();
  if (F.size() != L) throw IndexError("GkEvaluator: node values have wrong length");
  std::vector<double> a(L), v(L), y(L), out(L);
  const auto& ker = simd::kernels();
  ker.hadamard(model_->weights().data(), F.data(), a.data(), L);
  for (std::size_t n = 0; n < L; ++n) {
    ker.hadamard(a.data(), model_->basis_row(n).data(), v.data(), L);
    ker.gemv(H_.data(), L, L, v.data(), y.data());
    out[n] = std::sqrt(std::max(0.0, ker.dot(v.data(), y.data(), L)));
  }
  return out;
}

std::shared_ptr<const GkEvaluator> cached_evaluator(std::shared_ptr<const SpectralModel> model, SemigroupKind kind,
                                                    int k) {
  using Key = std::tuple<const SpectralModel*, int, int>;
  static std::mutex mu;
  static std::map<Key, std::pair<std::weak_ptr<const SpectralModel>, std::shared_ptr<const GkEvaluator>>> cache;
  const Key key{model.get(), static_cast<int>(kind), k};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end() && !it->second.first.expired()) return it->second.second;
  }
  auto ev = std::make_shared<const GkEvaluator>(model, kind, k);
  std::lock_guard lock(mu);
  // Drop entries whose model has gone away (the pointer may be reused).
  for (auto it = cache.begin(); it != cache.end();)
    it = it->second.first.expired() ? cache.erase(it) : std::next(it);
  cache[key] = {model, ev};
  return ev;
}

namespace {

GkResult gk_closed(std::shared_ptr<const SpectralModel> model, const FiniteSequence& f, std::size_t n, int k,
                   SemigroupKind kind) {
  if (n >= model->size()) throw IndexError("g_k index n outside the model");
  model->require_support(f.support(), "g_k");
  const auto ev = cached_evaluator(model, kind, k);
  const auto F = model->synthesize_at_nodes(f);
  return {n, k, ev->value(F, n), GkMethod::closed_form, model->size()};
}

}  // namespace

GkResult gk_heat(std::shared_ptr<const SpectralModel> model, const FiniteSequence& f, std::size_t n, int k) {
  return gk_closed(std::move(model), f, n, k, SemigroupKind::heat);
}

GkResult gk_poisson(std::shared_ptr<const SpectralModel> model, const FiniteSequence& f, std::size_t n, int k) {
  return gk_closed(std::move(model), f, n, k, SemigroupKind::poisson);
}

GkResult gk_numeric_oracle(const SpectralModel& model, const FiniteSequence& f, std::size_t n, int k, double tol) {
  BkSpace{k}.validate();
  if (n >= model.size()) throw IndexError("g_k index n outside the model");
  model.require_support(f.support(), "gk_numeric_oracle");
  const std::size_t L = model.size();
  const auto F = model.synthesize_at_nodes(f);
  const auto lam = model.lambdas();
  std::vector<double> c(L);
  double c_abs = 0.0, lam_min = INFINITY;
  for (std::size_t j = 0; j < L; ++j) {
    c[j] = model.weights()[j] * F[j] * model.basis(n, j) * std::pow(-lam[j], k);
    c_abs += std::abs(c[j]);
    lam_min = std::min(lam_min, lam[j]);
  }
  auto integrand = [&](double t) {
    double h = 0.0;
    for (std::size_t j = 0; j < L; ++j) h += c[j] * std::exp(-t * lam[j]);
    return std::pow(t, 2 * k - 1) * h * h;
  };
  // int_T^inf t^{2k-1} (C e^{-t lam_min})^2 dt
  auto tail = [&](double T) {
    const double a = 2.0 * lam_min;
    return c_abs * c_abs * std::tgamma(2.0 * k) * boost::math::gamma_q(2.0 * k, a * T) / std::pow(a, 2 * k);
  };
  double total = 0.0, err_total = 0.0;
  double a = 0.0, b = 1.0 / 16.0;
  for (int panel = 0; panel < 120; ++panel) {
    double err = 0.0;
    total += bmq::gauss_kronrod<double, 31>::integrate(integrand, a, b, 4, 1e-13, &err);
    err_total += err;
    const double rest = tail(b);
    if (rest <= tol * total || (total == 0.0 && rest == 0.0))
      return {n, k, std::sqrt(total), GkMethod::numeric_t_integration, L};
    a = b;
    b *= 2.0;
  }
  throw ConvergenceError("numeric t-integration tail did not fall below tolerance", tail(a) + err_total);
}

double gk_polarization(const GkEvaluator& ev, const FiniteSequence& f, const FiniteSequence& h) {
  const auto& model = ev.model();
  const std::size_t L = model.size();
  const auto F = model.synthesize_at_nodes(f);
  const auto Hn = model.synthesize_at_nodes(h);
  std::vector<double> vf(L), vh(L);
  double s = 0.0;
  for (std::size_t n = 0; n < L; ++n) {
    const auto row = model.basis_row(n);
    for (std::size_t j = 0; j < L; ++j) {
      vf[j] = model.weights()[j] * F[j] * row[j];
      vh[j] = model.weights()[j] * Hn[j] * row[j];
    }
    s += ev.bilinear(vf, vh);
  }
  return s;
}

InductionCheck induction_identity_check(std::shared_ptr<const SpectralModel> model, const FiniteSequence& f,
                                        std::size_t n, int k) {
  BkSpace{k}.validate();
  const auto next = cached_evaluator(model, SemigroupKind::heat, k + 1);
  const auto first = cached_evaluator(model, SemigroupKind::heat, 1);
  InductionCheck out;
  const double g = gk_heat(model, f, n, k + 1).value;
  out.lhs = g * g;
  auto integrand = [&](double s) {
    if (!std::isfinite(s)) return 0.0;
    const auto h = apply_semigroup(*model, f, s, SemigroupKind::heat, k);
    const double g1 = first->value(model->synthesize_at_nodes(h), n);
    return g1 == 0.0 ? 0.0 : std::pow(s, 2 * k - 1) * g1 * g1;
  };
  bmq::exp_sinh<double> integrator;
  double err = 0.0;
  const double I = integrator.integrate(integrand, 1e-13, &err);
  out.rhs = 2.0 * k * (2.0 * k + 1.0) * I;
  out.relative_error = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), 1e-300);
  return out;
}

double bk_kernel_norm(const GkEvaluator& ev, std::size_t m, std::size_t n) {
  const auto& model = ev.model();
  const std::size_t L = model.size();
  std::vector<double> u(L);
  simd::kernels().hadamard(model.basis_row(m).data(), model.basis_row(n).data(), u.data(), L);
  simd::kernels().hadamard(u.data(), model.weights().data(), u.data(), L);
  return ev.norm(u);
}

double bk_kernel_norm(std::shared_ptr<const SpectralModel> model, std::size_t m, std::size_t n, int k) {
  return bk_kernel_norm(*cached_evaluator(std::move(model), SemigroupKind::heat, k), m, n);
}

double bk_kernel_difference_norm(const GkEvaluator& ev, std::size_t m, std::size_t n) {
  const auto& model = ev.model();
  const std::size_t L = model.size();
  if (m + 1 >= L || n >= L) throw IndexError("bk_kernel_difference_norm: index outside the model");
  const auto a = model.basis_row(m + 1), b = model.basis_row(m), c = model.basis_row(n);
  std::vector<double> u(L);
  for (std::size_t j = 0; j < L; ++j) u[j] = model.weights()[j] * (a[j] - b[j]) * c[j];
  return ev.norm(u);
}

const char* schlafli_term_name(SchlafliTerm term) noexcept {
  switch (term) {
    case SchlafliTerm::I1: return "I1";
    case SchlafliTerm::I2: return "I2";
    case SchlafliTerm::J1: return "J1";
    case SchlafliTerm::J2: return "J2";
    case SchlafliTerm::J3: return "J3";
    case SchlafliTerm::I1I2: return "I1I2";
  }
  return "?";
}

namespace {

// Each term is C Gamma(q) / (pi Gamma(n-1/2)^2) times
//   int int poly(u,v) (u(1-u) v(1-v))^{n-3/2} / (u+v)^q du dv
// over the unit square.
struct SchlafliSpec {
  double C;
  long q_offset;  // q = 2n + q_offset
  double (*poly)(double u, double v);
};

SchlafliSpec schlafli_spec(SchlafliTerm term) {
  switch (term) {
    case SchlafliTerm::I1: return {1.0, -2, [](double u, double v) { return (2 * u - 1) * (2 * v - 1); }};
    case SchlafliTerm::I2: return {4.0, 0, [](double u, double v) { return u * u * v * v; }};
    case SchlafliTerm::J1: return {4.0, -4, [](double u, double v) { return (2 * u - 1) * (2 * v - 1); }};
    case SchlafliTerm::J2: return {4.0, -2, [](double u, double v) { return (2 * u - 1) * (2 * v - 1) * u * v; }};
    case SchlafliTerm::J3: return {16.0, 0, [](double u, double v) { return u * u * u * v * v * v; }};
    case SchlafliTerm::I1I2: return {2.0, -1, [](double u, double v) { return (2 * u - 1) * v * v; }};
  }
  throw DomainError("unknown Schlafli term");
}

}  // namespace

double schlafli_b1_oracle(std::size_t n, SchlafliTerm term) {
  const bool is_j = term == SchlafliTerm::J1 || term == SchlafliTerm::J2 || term == SchlafliTerm::J3;
  if (n < (is_j ? 4u : 2u)) throw DomainError("schlafli_b1_oracle: n below the validity range");
  const auto spec = schlafli_spec(term);
  const double nn = static_cast<double>(n);
  const double e = nn - 1.5;
  const double q = 2.0 * nn + static_cast<double>(spec.q_offset);
  // (c(1-c))^e = 4^{-e} (4c(1-c))^e; the 4^{-e} goes into the prefactor.
  const double log_pre = std::log(spec.C) + std::lgamma(q) - std::log(std::numbers::pi) - 2.0 * std::lgamma(nn - 0.5) -
                         e * std::log(4.0);
  // u = s c, v = s (1-c), du dv = s ds dc; u^e v^e = s^{2e} (c(1-c))^e.
  auto inner = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double lo = std::max(0.0, 1.0 - 1.0 / s), hi = std::min(1.0, 1.0 / s);
    if (hi <= lo) return 0.0;
    const double log_s = std::log(s);
    auto g = [&](double c) {
      const double u = s * c, v = s * (1.0 - c);
      if (u >= 1.0 || v >= 1.0 || c <= 0.0 || c >= 1.0) return 0.0;
      const double lg =
          e * (std::log(4.0 * c * (1.0 - c)) + std::log1p(-u) + std::log1p(-v)) + (2.0 * e + 1.0 - q) * log_s;
      return spec.poly(u, v) * std::exp(lg);
    };
    std::vector<double> cuts{lo};
    const double w = 3.0 / std::sqrt(nn);
    for (double x : {0.5 - w, 0.5, 0.5 + w})
      if (x > lo && x < hi) cuts.push_back(x);
    cuts.push_back(hi);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      sum += bmq::gauss_kronrod<double, 31>::integrate(g, cuts[i], cuts[i + 1], 12, 1e-12);
    return sum;
  };
  std::vector<double> cuts{0.0};
  for (int p = -3; p < 12; ++p) {
    const double x = std::ldexp(1.0, p) / nn;
    if (x < 2.0) cuts.push_back(x);
  }
  cuts.push_back(1.0);
  cuts.push_back(2.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += bmq::gauss_kronrod<double, 31>::integrate(inner, cuts[i], cuts[i + 1], 12, 1e-11);
  return std::exp(log_pre) * total;
}

double schlafli_dk_norm2(std::size_t n) {
  return 0.25 * (schlafli_b1_oracle(n, SchlafliTerm::I1) + 2.0 * schlafli_b1_oracle(n, SchlafliTerm::I1I2) +
                 schlafli_b1_oracle(n, SchlafliTerm::I2));
}

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y, double lo, double hi) {
  if (x.size() != y.size()) throw IndexError("fit_loglog: x and y differ in length");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo || x[i] > hi) continue;
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_loglog: nonpositive data in window");
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
    ++count;
  }
  if (count < 3) throw DomainError("fit_loglog: fewer than 3 points in the fit window");
  const double N = static_cast<double>(count);
  SlopeFit fit;
  fit.slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / N;
  fit.window_lo = lo;
  fit.window_hi = hi;
  fit.points = count;
  return fit;
}

void write_decay_csv(std::ostream& os, std::span<const DecayRow> rows, const SlopeFit& fit) {
  os << "separation,norm,fitted_slope,window\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.separation << ',' << r.norm << ',' << fit.slope << ",[" << fit.window_lo << ";" << fit.window_hi << "]\n";
}

}  // namespace jlps
