#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "jlps/bessel.hpp"
#include "jlps/errors.hpp"
#include "jlps/littlewood_paley.hpp"
#include "jlps/quadrature.hpp"
#include "jlps/semigroups.hpp"

using namespace jlps;

namespace {

FiniteSequence random_sequence(std::uint64_t seed, std::size_t support) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  FiniteSequence f(support + 1);
  for (std::size_t i = 0; i <= support; ++i) f[i] = N(rng);
  return f;
}

double sum_sq(const std::vector<double>& g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return s;
}

}  // namespace

class IdentityTest : public ::testing::TestWithParam<std::tuple<JacobiParams, int, SemigroupKind>> {};

TEST_P(IdentityTest, L2Ratio) {
  const auto [P, k, kind] = GetParam();
  const auto model = build_spectral_model(P, 80);
  const GkEvaluator ev(model, kind, k);
  const double target = std::tgamma(2.0 * k) / std::pow(4.0, k);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto f = random_sequence(s, 8 * s);
    EXPECT_NEAR(sum_sq(ev.values(f)) / std::pow(f.norm2(), 2) / target, 1.0, 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Params, IdentityTest,
                         ::testing::Combine(::testing::Values(JacobiParams{-0.5, -0.5}, JacobiParams{0, 0},
                                                              JacobiParams{0.7, 2.3}),
                                            ::testing::Values(1, 2, 3),
                                            ::testing::Values(SemigroupKind::heat, SemigroupKind::poisson)));

TEST(Gk, TargetRatios) {
  const auto model = build_spectral_model({0.0, 0.0}, 64);
  const auto f = FiniteSequence::unit(3);
  EXPECT_NEAR(sum_sq(GkEvaluator(model, SemigroupKind::heat, 1).values(f)), 0.25, 1e-12);
  EXPECT_NEAR(sum_sq(GkEvaluator(model, SemigroupKind::heat, 2).values(f)), 0.375, 1e-12);
  EXPECT_NEAR(sum_sq(GkEvaluator(model, SemigroupKind::heat, 3).values(f)), 1.875, 1e-11);
}

TEST(Gk, ClosedFormMatchesNumericOracle) {
  const auto model = cached_model({0.7, 2.3}, 64);
  const auto f = FiniteSequence::unit(0);
  for (int k = 1; k <= 3; ++k)
    for (std::size_t n = 0; n <= 16; n += 4) {
      const auto a = gk_heat(model, f, n, k);
      const auto b = gk_numeric_oracle(*model, f, n, k);
      EXPECT_EQ(a.method, GkMethod::closed_form);
      EXPECT_EQ(b.method, GkMethod::numeric_t_integration);
      EXPECT_NEAR(a.value, b.value, 1e-9) << k << ' ' << n;
    }
  EXPECT_GT(gk_numeric_oracle(*model, f, 0, 1).value, 0.0);
  EXPECT_GT(gk_poisson(model, f, 0, 1).value, 0.0);
}

TEST(Gk, PoissonDominatedBySqrt2Heat) {
  const auto model = build_spectral_model({0.7, 2.3}, 96);
  const GkEvaluator h(model, SemigroupKind::heat, 1), p(model, SemigroupKind::poisson, 1);
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto f = random_sequence(100 + s, 3 * s);
    const auto gh = h.values(f), gp = p.values(f);
    for (std::size_t n = 0; n < gh.size(); ++n) EXPECT_LE(gp[n], std::sqrt(2.0) * gh[n] + 1e-12);
  }
}

TEST(Gk, Polarization) {
  const auto model = build_spectral_model({0.0, 0.0}, 64);
  const GkEvaluator ev(model, SemigroupKind::heat, 2);
  const auto f = random_sequence(7, 10), h = random_sequence(8, 12);
  double inner = 0.0;
  for (std::size_t n = 0; n < 11; ++n) inner += f[n] * h[n];
  EXPECT_NEAR(gk_polarization(ev, f, h), 0.375 * inner, 1e-11);
}

TEST(Gk, InductionIdentity) {
  const auto model = build_spectral_model({0.0, 0.0}, 48);
  const auto f = random_sequence(3, 6);
  for (int k = 1; k <= 2; ++k) {
    const auto r = induction_identity_check(model, f, 2, k);
    EXPECT_LT(r.relative_error, 1e-8) << k;
  }
}

TEST(Gk, ComplexNodesSplit) {
  const auto model = build_spectral_model({0.0, 0.0}, 32);
  const GkEvaluator ev(model, SemigroupKind::heat, 1);
  const auto f = random_sequence(1, 5), h = random_sequence(2, 5);
  const auto F = model->synthesize_at_nodes(f), H = model->synthesize_at_nodes(h);
  std::vector<Complex> Z(F.size());
  for (std::size_t j = 0; j < F.size(); ++j) Z[j] = {F[j], H[j]};
  const auto gz = ev.values_at_nodes(std::span<const Complex>(Z));
  const auto gf = ev.values_at_nodes(std::span<const double>(F));
  const auto gh = ev.values_at_nodes(std::span<const double>(H));
  for (std::size_t n = 0; n < gz.size(); ++n) EXPECT_NEAR(gz[n], std::hypot(gf[n], gh[n]), 1e-13);
}

TEST(BkNorm, MatchesDirectIntegral) {
  // ||G_{t,1}(m,n)||^2 = int t (d_t W_t(m,n))^2 dt on the Chebyshev model.
  const auto model = build_spectral_model(kChebyshev, 512);
  const GkEvaluator ev(model, SemigroupKind::heat, 1);
  boost::math::quadrature::exp_sinh<double> q;
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{0, 3}, {2, 5}, {4, 4}}) {
    auto g = [&](double t) {
      double d = 0.0;
      const auto& P = *model;
      for (std::size_t j = 0; j < P.size(); ++j)
        d -= P.weights()[j] * P.lambdas()[j] * std::exp(-t * P.lambdas()[j]) * P.basis(m, j) * P.basis(n, j);
      return t * d * d;
    };
    const double direct = std::sqrt(q.integrate(g, 1e-13));
    EXPECT_NEAR(bk_kernel_norm(ev, m, n), direct, 1e-9 * direct);
  }
}

// int_0^inf t (d/dt e^{-t} I_n(t))^2 dt: Bessel tables on [0, T], then the
// large-t expansion e^{-t} I_v(t) ~ (2 pi t)^{-1/2} sum_k (-1)^k a_k(v) t^{-k}
// integrated termwise on [T, inf).
double dk_norm2_direct(std::size_t n) {
  const double T = 100.0 * n * n;
  auto d = [&](double t) {
    const auto tab = bessel_i_scaled(t, n + 1);
    return 0.5 * (tab(long(n) - 1) + tab(long(n) + 1)) - tab(long(n));
  };
  double head = 0.0;
  for (double a = 0.0, b = 0.5; a < T; a = b, b = std::min(2 * b, T))
    head += boost::math::quadrature::gauss_kronrod<double, 61>::integrate([&](double t) { return t * d(t) * d(t); },
                                                                           a, b, 6, 1e-14);
  const int K = 12;
  auto ak = [](double v, int k) {
    double p = 1.0;
    for (int i = 1; i <= k; ++i) p *= (4 * v * v - (2.0 * i - 1) * (2.0 * i - 1)) / (8.0 * i);
    return p;
  };
  std::vector<double> c(K + 1);
  for (int k = 1; k <= K; ++k)
    c[k] = (k % 2 ? -1.0 : 1.0) * (0.5 * (ak(n - 1.0, k) + ak(n + 1.0, k)) - ak(double(n), k));
  double tail = 0.0;
  for (int j = 1; j <= K; ++j)
    for (int k = 1; k <= K; ++k) tail += c[j] * c[k] * std::pow(T, 1.0 - j - k) / (j + k - 1.0);
  return head + tail / (2.0 * std::numbers::pi);
}

TEST(Schlafli, DkMatchesBesselIntegral) {
  for (std::size_t n : {8u, 16u, 32u}) EXPECT_NEAR(schlafli_dk_norm2(n) / dk_norm2_direct(n), 1.0, 1e-8) << n;
}

TEST(Schlafli, ScalingsAndDomain) {
  double lo = INFINITY, hi = 0.0;
  for (std::size_t n : {8u, 16u, 32u, 64u, 128u}) {
    const double v = (n - 0.5) * (n - 0.5) * schlafli_b1_oracle(n, SchlafliTerm::I1);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LT(hi / lo, 10.0);
  EXPECT_THROW(schlafli_b1_oracle(3, SchlafliTerm::J1), DomainError);
  EXPECT_THROW(schlafli_b1_oracle(1, SchlafliTerm::I1), DomainError);
}

TEST(SlopeFit, ExactPowerLaw) {
  std::vector<double> x, y;
  for (double d = 2; d <= 256; d *= 2) {
    x.push_back(d);
    y.push_back(3.0 * std::pow(d, -1.5));
  }
  const auto fit = fit_loglog(x, y, 4, 128);
  EXPECT_NEAR(fit.slope, -1.5, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-10);
  EXPECT_EQ(fit.points, 6u);
  EXPECT_ANY_THROW(fit_loglog(x, y, 100, 200));
}

TEST(DecaySlopes, ShortWindow) {
  const auto model = build_spectral_model(kChebyshev, 1024);
  const GkEvaluator ev(model, SemigroupKind::heat, 1);
  std::vector<double> d{8, 11, 16, 23, 32}, a, b;
  for (double s : d) {
    a.push_back(bk_kernel_norm(ev, 0, std::size_t(s)));
    b.push_back(bk_kernel_difference_norm(ev, 128, 128 + std::size_t(s)));
  }
  const double sa = fit_loglog(d, a, 8, 32).slope, sb = fit_loglog(d, b, 8, 32).slope;
  EXPECT_GT(sa, -1.2);
  EXPECT_LT(sa, -0.8);
  EXPECT_GT(sb, -2.3);
  EXPECT_LT(sb, -1.7);
}
