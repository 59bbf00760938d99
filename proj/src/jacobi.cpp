#include "jlps/jacobi.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "jlps/errors.hpp"

namespace jlps {

void JacobiParams::validate() const {
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw DomainError("Jacobi parameters must satisfy alpha, beta > -1 (got alpha=" + std::to_string(alpha) +
                      ", beta=" + std::to_string(beta) + ")");
}

double JacobiParams::mass() const {
  validate();
  const double s = alpha + beta;
  return std::exp((s + 1.0) * std::numbers::ln2 + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                  std::lgamma(s + 2.0));
}

CoeffTable::CoeffTable(JacobiParams params, std::size_t max_index) : params_(params) {
  params_.validate();
  const double al = params_.alpha, be = params_.beta, s = al + be;
  const std::size_t count = max_index + 1;
  a_.resize(count);
  b_.resize(count);
  w_.resize(count);

  // n = 0 has its own closed forms; the n >= 1 expressions divide by zero at
  // alpha + beta = -1.
  a_[0] = 2.0 / (s + 2.0) * std::sqrt((al + 1.0) * (be + 1.0) / (s + 3.0));
  b_[0] = (be - al) / (s + 2.0);
  w_[0] = std::exp(0.5 * (std::lgamma(s + 2.0) - (s + 1.0) * std::numbers::ln2 - std::lgamma(al + 1.0) -
                          std::lgamma(be + 1.0)));

  const bool symmetric = al == be;
  for (std::size_t i = 1; i < count; ++i) {
    const double n = static_cast<double>(i);
    const double two_n_s = 2.0 * n + s;
    a_[i] = 2.0 / (two_n_s + 2.0) *
            std::sqrt((n + 1.0) * (n + al + 1.0) * (n + be + 1.0) * (n + s + 1.0) /
                      ((two_n_s + 1.0) * (two_n_s + 3.0)));
    b_[i] = symmetric ? 0.0 : (be * be - al * al) / (two_n_s * (two_n_s + 2.0));
    // Gamma(n + .) overflows near n = 170, so the ratio goes through lgamma.
    const double log_w2 = std::log(two_n_s + 1.0) + std::lgamma(n + 1.0) + std::lgamma(n + s + 1.0) -
                          (s + 1.0) * std::numbers::ln2 - std::lgamma(n + al + 1.0) - std::lgamma(n + be + 1.0);
    w_[i] = std::exp(0.5 * log_w2);
  }
}

namespace {

void check_x(double x) {
  if (!(x >= -1.0 - 1e-14 && x <= 1.0 + 1e-14)) throw DomainError("evaluation point outside [-1, 1]");
}

}  // namespace

double eval_poly(const CoeffTable& table, std::size_t n, double x) {
  if (n > table.max_index()) throw IndexError("eval_poly: degree " + std::to_string(n) + " exceeds table size");
  check_x(x);
  const auto a = table.a();
  const auto b = table.b();
  double prev = 0.0;
  double cur = table.w(0);
  for (std::size_t k = 0; k < n; ++k) {
    const double next = ((x - b[k]) * cur - (k > 0 ? a[k - 1] * prev : 0.0)) / a[k];
    prev = cur;
    cur = next;
  }
  return cur;
}

void eval_polys(const CoeffTable& table, double x, std::span<double> out) {
  if (out.empty()) return;
  if (out.size() - 1 > table.max_index()) throw IndexError("eval_polys: table too small");
  check_x(x);
  const auto a = table.a();
  const auto b = table.b();
  out[0] = table.w(0);
  if (out.size() > 1) out[1] = (x - b[0]) * out[0] / a[0];
  for (std::size_t k = 1; k + 1 < out.size(); ++k) out[k + 1] = ((x - b[k]) * out[k] - a[k - 1] * out[k - 1]) / a[k];
}

FiniteSequence apply_jacobi(const CoeffTable& table, const FiniteSequence& f, bool shifted) {
  const std::ptrdiff_t supp = f.support();
  if (supp < 0) return FiniteSequence(1);
  const auto last = static_cast<std::size_t>(supp);
  if (last + 1 > table.max_index()) throw IndexError("apply_jacobi: coefficient table too small for support");
  FiniteSequence out(last + 2);
  for (std::size_t n = 0; n < out.size(); ++n) {
    double v = table.b(n) * f[n] + table.a(n) * f[n + 1];
    if (n > 0) v += table.a(n - 1) * f[n - 1];
    if (shifted) v -= f[n];
    out[n] = v;
  }
  return out;
}

namespace {

// One forward pass of the recurrence, accumulating f(k) p_k(x) as it goes.
template <class S>
S synthesize_impl(const CoeffTable& table, const BasicSequence<S>& f, double x) {
  const std::ptrdiff_t supp = f.support();
  if (supp < 0) return S{};
  const auto last = static_cast<std::size_t>(supp);
  if (last > table.max_index()) throw IndexError("synthesize: support exceeds coefficient table");
  check_x(x);
  const auto a = table.a();
  const auto b = table.b();
  double prev = 0.0;
  double cur = table.w(0);
  S acc = f[0] * cur;
  for (std::size_t k = 0; k < last; ++k) {
    const double next = ((x - b[k]) * cur - (k > 0 ? a[k - 1] * prev : 0.0)) / a[k];
    prev = cur;
    cur = next;
    acc += f[k + 1] * cur;
  }
  return acc;
}

}  // namespace

double synthesize(const CoeffTable& table, const FiniteSequence& f, double x) { return synthesize_impl(table, f, x); }

Complex synthesize(const CoeffTable& table, const ComplexSequence& f, double x) {
  return synthesize_impl(table, f, x);
}

}  // namespace jlps
