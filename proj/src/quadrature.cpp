#include "jlps/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <tuple>

#include "jlps/simd.hpp"

namespace jlps {
namespace {

// Implicit-shift QL on a symmetric tridiagonal matrix; eigenvalues only.
// d: diagonal, e: off-diagonal with e[i] coupling rows i and i+1.
void tridiagonal_eigenvalues(std::vector<double>& d, std::vector<double> e) {
  const int n = static_cast<int>(d.size());
  e.resize(d.size(), 0.0);
  if (n > 0) e[n - 1] = 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 100) throw NumericalFault("tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// p_L(x) and p_L'(x) by the recurrence and its derivative.
void poly_and_derivative(const CoeffTable& t, std::size_t L, double x, double& p, double& dp) {
  double p0 = 0.0, p1 = t.w(0), d0 = 0.0, d1 = 0.0;
  for (std::size_t k = 0; k < L; ++k) {
    const double am = k > 0 ? t.a(k - 1) : 0.0;
    const double p2 = ((x - t.b(k)) * p1 - am * p0) / t.a(k);
    const double d2 = ((x - t.b(k)) * d1 + p1 - am * d0) / t.a(k);
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  p = p1;
  dp = d1;
}

struct RuleWithBasis {
  QuadratureRule rule;
  std::vector<double> basis;  // row-major L x L, basis[m*L + j] = p_m(x_j)
};

RuleWithBasis build_rule(JacobiParams params, std::size_t L, const CoeffTable& table) {
  if (L == 0) throw DomainError("quadrature rule needs at least one node");
  std::vector<double> d(table.b().begin(), table.b().begin() + static_cast<std::ptrdiff_t>(L));
  std::vector<double> e(table.a().begin(), table.a().begin() + static_cast<std::ptrdiff_t>(L - 1));
  tridiagonal_eigenvalues(d, e);
  std::sort(d.begin(), d.end());

  // Newton polish on p_L; the QL eigenvalues are already accurate to a few
  // ulps of |J| so this only removes the last bits.
  for (double& x : d) {
    for (int it = 0; it < 2; ++it) {
      double p, dp;
      poly_and_derivative(table, L, x, p, dp);
      if (dp == 0.0 || !std::isfinite(p / dp)) break;
      const double step = p / dp;
      if (std::abs(step) > 1e-8) break;
      x -= step;
    }
  }
  for (std::size_t j = 1; j < L; ++j)
    if (!(d[j] > d[j - 1])) throw NumericalFault("Gauss-Jacobi nodes not strictly ascending");
  if (!(d.front() > -1.0 && d.back() < 1.0)) throw NumericalFault("Gauss-Jacobi node outside (-1, 1)");

  RuleWithBasis out;
  out.rule.params = params;
  out.rule.nodes = d;
  out.rule.weights.resize(L);
  out.basis.assign(L * L, 0.0);
  std::vector<double> column(L);
  for (std::size_t j = 0; j < L; ++j) {
    eval_polys(table, d[j], column);
    double s = 0.0;
    for (std::size_t m = 0; m < L; ++m) {
      s += column[m] * column[m];
      out.basis[m * L + j] = column[m];
    }
    out.rule.weights[j] = 1.0 / s;
  }
  return out;
}

}  // namespace

QuadratureRule gauss_jacobi_rule(JacobiParams params, std::size_t L) {
  params.validate();
  const CoeffTable table(params, L);
  return build_rule(params, L, table).rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& g) {
  double s = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) s += rule.weights[j] * g(rule.nodes[j]);
  return s;
}

void write_rule_csv(std::ostream& os, const QuadratureRule& rule) {
  os << "j,x_j,w_j\n";
  os.precision(17);
  for (std::size_t j = 0; j < rule.size(); ++j) os << j + 1 << ',' << rule.nodes[j] << ',' << rule.weights[j] << '\n';
}

SpectralModel::SpectralModel(JacobiParams params, std::size_t L) : coeffs_(params, L) {
  auto built = build_rule(params, L, coeffs_);
  rule_ = std::move(built.rule);
  basis_ = std::move(built.basis);
  lambdas_.resize(L);
  sqrt_lambdas_.resize(L);
  for (std::size_t j = 0; j < L; ++j) {
    lambdas_[j] = 1.0 - rule_.nodes[j];
    sqrt_lambdas_[j] = std::sqrt(lambdas_[j]);
  }
}

void SpectralModel::require_support(std::ptrdiff_t support, const char* what) const {
  if (support >= static_cast<std::ptrdiff_t>(size()))
    throw IndexError(std::string(what) + ": sequence support " + std::to_string(support) + " exceeds model size " +
                     std::to_string(size()));
}

namespace {

template <class S>
std::vector<S> synth_impl(const SpectralModel& model, const BasicSequence<S>& f) {
  model.require_support(f.support(), "synthesize_at_nodes");
  const std::size_t L = model.size();
  std::vector<S> F(L, S{});
  const std::size_t top = static_cast<std::size_t>(std::max<std::ptrdiff_t>(f.support() + 1, 0));
  for (std::size_t m = 0; m < top; ++m) {
    const S c = f[m];
    if (c == S{}) continue;
    const auto row = model.basis_row(m);
    for (std::size_t j = 0; j < L; ++j) F[j] += c * row[j];
  }
  return F;
}

}  // namespace

std::vector<double> SpectralModel::synthesize_at_nodes(const FiniteSequence& f) const { return synth_impl(*this, f); }

std::vector<Complex> SpectralModel::synthesize_at_nodes(const ComplexSequence& f) const {
  return synth_impl(*this, f);
}

FiniteSequence SpectralModel::analyze(std::span<const double> phi) const {
  const std::size_t L = size();
  if (phi.size() != L) throw IndexError("analyze: spectral vector has wrong length");
  const auto& k = simd::kernels();
  FiniteSequence out(L);
  for (std::size_t n = 0; n < L; ++n) out[n] = k.dot3(rule_.weights.data(), phi.data(), basis_row(n).data(), L);
  return out;
}

ComplexSequence SpectralModel::analyze(std::span<const Complex> phi) const {
  const std::size_t L = size();
  if (phi.size() != L) throw IndexError("analyze: spectral vector has wrong length");
  std::vector<double> re(L), im(L);
  for (std::size_t j = 0; j < L; ++j) {
    re[j] = phi[j].real();
    im[j] = phi[j].imag();
  }
  const FiniteSequence a = analyze(std::span<const double>(re));
  const FiniteSequence b = analyze(std::span<const double>(im));
  ComplexSequence out(L);
  for (std::size_t n = 0; n < L; ++n) out[n] = Complex(a[n], b[n]);
  return out;
}

std::shared_ptr<const SpectralModel> build_spectral_model(JacobiParams params, std::size_t L) {
  return std::make_shared<const SpectralModel>(params, L);
}

namespace {

struct Cache {
  std::mutex mu;
  std::map<std::tuple<double, double, std::size_t>, std::shared_ptr<const SpectralModel>> models;
};

Cache& cache() {
  static Cache c;
  return c;
}

}  // namespace

std::shared_ptr<const SpectralModel> cached_model(JacobiParams params, std::size_t L) {
  const auto key = std::make_tuple(params.alpha, params.beta, L);
  auto& c = cache();
  {
    std::lock_guard lock(c.mu);
    if (auto it = c.models.find(key); it != c.models.end()) return it->second;
  }
  // Built outside the lock; a concurrent duplicate build is harmless.
  auto model = build_spectral_model(params, L);
  std::lock_guard lock(c.mu);
  return c.models.emplace(key, std::move(model)).first->second;
}

void clear_model_cache() {
  std::lock_guard lock(cache().mu);
  cache().models.clear();
}

}  // namespace jlps
