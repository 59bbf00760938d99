#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "jlps/quadrature.hpp"
#include "jlps/semigroups.hpp"
#include "jlps/sequence.hpp"

namespace jlps {

/// Norm ||h||^2 = int_0^inf t^{2k-1} |h(t)|^2 dt.
struct BkSpace {
  int k = 1;
  void validate() const;
};

enum class GkMethod { closed_form, numeric_t_integration };

const char* method_name(GkMethod m) noexcept;

struct GkResult {
  std::size_t n = 0;
  int k = 1;
  double value = 0.0;
  GkMethod method = GkMethod::closed_form;
  std::size_t model_size = 0;
};

/// Closed-form t-integration on a spectral model. With mu_j = lambda_j
/// (heat) or sqrt(lambda_j) (Poisson),
///   int_0^inf t^{2k-1} (mu_j mu_l)^k e^{-t(mu_j+mu_l)} dt = Gamma(2k) (mu_j mu_l)^k / (mu_j+mu_l)^{2k},
/// so every B_k norm of a spectral combination sum_j v_j (-mu_j)^k e^{-t mu_j}
/// is sqrt(v^T H v) with that matrix H. Built once per (model, kind, k).
class GkEvaluator {
 public:
  GkEvaluator(std::shared_ptr<const SpectralModel> model, SemigroupKind kind, int k);

  const SpectralModel& model() const noexcept { return *model_; }
  SemigroupKind kind() const noexcept { return kind_; }
  int k() const noexcept { return k_; }
  std::span<const double> matrix() const noexcept { return H_; }

  /// sqrt(v^T H v), compensated.
  double norm(std::span<const double> v) const;
  /// v^T H u, compensated.
  double bilinear(std::span<const double> v, std::span<const double> u) const;

  /// g_k(f)(n) (heat) or gfrak_k(f)(n) (Poisson) from node values F(x_j).
  double value(std::span<const double> F, std::size_t n) const;
  /// Square function at every n < L. O(L^3), plain accumulation.
  std::vector<double> values(const FiniteSequence& f) const;
  std::vector<double> values_at_nodes(std::span<const double> F) const;
  /// Complex node values: |h|^2 = (Re h)^2 + (Im h)^2 splits the square function.
  std::vector<double> values_at_nodes(std::span<const Complex> F) const;

 private:
  std::shared_ptr<const SpectralModel> model_;
  SemigroupKind kind_;
  int k_;
  std::vector<double> H_;
};

/// Process-wide memo keyed by (model identity, kind, k).
std::shared_ptr<const GkEvaluator> cached_evaluator(std::shared_ptr<const SpectralModel> model, SemigroupKind kind,
                                                    int k);

GkResult gk_heat(std::shared_ptr<const SpectralModel> model, const FiniteSequence& f, std::size_t n, int k);
GkResult gk_poisson(std::shared_ptr<const SpectralModel> model, const FiniteSequence& f, std::size_t n, int k);

/// Independent check of gk_heat: adaptive Gauss-Kronrod in t over
/// geometrically growing panels, stopped once the analytic tail bound drops
/// below tol times the running total.
GkResult gk_numeric_oracle(const SpectralModel& model, const FiniteSequence& f, std::size_t n, int k,
                           double tol = 1e-14);

/// sum_{n<L} int t^{2k-1} (d_t^k W_t f)(n) (d_t^k W_t h)(n) dt; equals
/// Gamma(2k)/4^k <f, h> on the model.
double gk_polarization(const GkEvaluator& ev, const FiniteSequence& f, const FiniteSequence& h);

struct InductionCheck {
  double lhs = 0.0;  ///< g_{k+1}(f)(n)^2
  double rhs = 0.0;  ///< 2k (2k+1) int_0^inf s^{2k-1} g_1(d_s^k W_s f)(n)^2 ds
  double relative_error = 0.0;
};

/// Composition of a k-th order analysis with a first-order one, integrated
/// numerically in s; exercises int_0^r t (r-t)^{2k-1} dt = r^{2k+1}/(2k(2k+1)).
InductionCheck induction_identity_check(std::shared_ptr<const SpectralModel> model, const FiniteSequence& f,
                                        std::size_t n, int k);

/// ||G_{t,k}(m,n)||_{B_k}, G_{t,k}(m,n) = d_t^k K_t(m,n).
double bk_kernel_norm(const GkEvaluator& ev, std::size_t m, std::size_t n);
double bk_kernel_norm(std::shared_ptr<const SpectralModel> model, std::size_t m, std::size_t n, int k);
/// ||G_{t,k}(m+1,n) - G_{t,k}(m,n)||_{B_k}.
double bk_kernel_difference_norm(const GkEvaluator& ev, std::size_t m, std::size_t n);

// Schlafli-type double integrals over the unit square for the B_1 norms of
// the pieces of d_t e^{-t} I_n(t). Returned values are squared norms.
enum class SchlafliTerm { I1, I2, J1, J2, J3, I1I2 };

const char* schlafli_term_name(SchlafliTerm term) noexcept;

/// Squared B_1 norm of the term (I1I2 is the cross inner product <I1, I2>).
/// Requires n >= 2 for the I terms and n >= 4 for the J terms.
double schlafli_b1_oracle(std::size_t n, SchlafliTerm term);

/// ||d_t K_t(n)||_{B_1}^2 = (||I1||^2 + 2<I1,I2> + ||I2||^2) / 4.
double schlafli_dk_norm2(std::size_t n);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of log y against log x over x in [lo, hi].
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y, double lo, double hi);

struct DecayRow {
  double separation;
  double norm;
};

void write_decay_csv(std::ostream& os, std::span<const DecayRow> rows, const SlopeFit& fit);

}  // namespace jlps
