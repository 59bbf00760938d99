#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "jlps/bessel.hpp"
#include "jlps/quadrature.hpp"
#include "jlps/semigroups.hpp"

using namespace jlps;

TEST(Bessel, Values) {
  const auto t0 = bessel_i_scaled(0.0, 5);
  EXPECT_EQ(t0(0), 1.0);
  for (long n = 1; n <= 5; ++n) EXPECT_EQ(t0(n), 0.0);
  const auto t1 = bessel_i_scaled(1.0, 10);
  EXPECT_NEAR(t1(0), 0.46575960759364, 1e-13);
  EXPECT_NEAR(t1(2) / t1(0), 0.1357476698 / 1.2660658778, 1e-10);
  EXPECT_EQ(t1(-3), t1(3));
}

TEST(Bessel, NormalizationAndMonotonicity) {
  for (double t : {0.1, 1.0, 10.0, 50.0}) {
    const auto tab = bessel_i_scaled(t, 400);
    double s = tab(0);
    for (long n = 1; n <= 400; ++n) {
      s += 2 * tab(n);
      if (tab(n) > 0) {
        EXPECT_LT(tab(n), tab(n - 1));
        EXPECT_LE(tab(n), 1.0);
      }
    }
    EXPECT_NEAR(s, 1.0, 1e-12) << t;
  }
}

TEST(Bessel, MillerStartCoversLargeT) {
  // I_10(50)/I_0(50) is about 0.37; a short recurrence gets this wrong.
  const auto tab = bessel_i_scaled(50.0, 0);
  const auto big = bessel_i_scaled(50.0, 200);
  EXPECT_NEAR(tab(0), big(0), 1e-14);
  EXPECT_GT(miller_start_index(50.0, 0), 60u);
}

TEST(HeatKernel, ChebyshevOracle) {
  EXPECT_NEAR(chebyshev_heat_kernel(1.0, 0, 0), 0.46575960759364, 1e-13);
  // e^{-1}(I_0(1) + I_2(1)).
  EXPECT_NEAR(chebyshev_heat_kernel(1.0, 1, 1), 0.5156983845, 1e-10);
  // Row 0 carries a sqrt(2) for n >= 1 under the orthonormal basis.
  const auto tab = bessel_i_scaled(1.0, 4);
  EXPECT_NEAR(chebyshev_heat_kernel(1.0, 0, 1), std::numbers::sqrt2 * tab(1), 1e-15);
  for (std::size_t m = 0; m < 10; ++m)
    for (std::size_t n = 0; n < 10; ++n)
      EXPECT_EQ(chebyshev_heat_kernel(2.5, m, n), chebyshev_heat_kernel(2.5, n, m));
}

TEST(HeatKernel, ModelMatchesOracle) {
  const auto model = build_spectral_model(kChebyshev, 256);
  for (double t : {0.1, 1.0, 10.0})
    for (std::size_t m : {0u, 1u, 5u, 20u})
      for (std::size_t n : {0u, 1u, 3u, 20u, 40u})
        EXPECT_NEAR(heat_kernel(*model, {t, m, n, 0}), chebyshev_heat_kernel(t, m, n), 1e-13);
  EXPECT_NEAR(heat_kernel(*model, {0.0, 3, 3, 0}), 1.0, 1e-13);
  EXPECT_NEAR(heat_kernel(*model, {0.0, 3, 4, 0}), 0.0, 1e-13);
}

TEST(HeatKernel, DerivativeRecurrence) {
  const auto tab = bessel_i_scaled(1.0, 10);
  EXPECT_NEAR(heat_deriv_recurrence(tab, 1), 0.5 * (tab(2) - 2 * tab(1) + tab(0)), 1e-15);
  for (double t : {0.05, 0.2}) EXPECT_LT(heat_deriv_recurrence(bessel_i_scaled(t, 4), 0), 0.0);
  const double h = 1e-4;
  const double fd = (bessel_i_scaled(1 + h, 4)(1) - bessel_i_scaled(1 - h, 4)(1)) / (2 * h);
  EXPECT_NEAR(heat_deriv_recurrence(tab, 1), fd, 1e-7);

  const auto model = build_spectral_model(kChebyshev, 256);
  for (std::size_t m : {0u, 2u, 7u})
    for (std::size_t n : {0u, 1u, 9u})
      EXPECT_NEAR(heat_kernel(*model, {1.0, m, n, 1}), chebyshev_heat_kernel_dt(bessel_i_scaled(1.0, 24), m, n), 1e-10);
}

TEST(SemigroupLaw, Matrices) {
  const auto model = build_spectral_model({0.7, 2.3}, 48);
  const std::size_t L = 48;
  auto K = [&](double t) { return kernel_matrix(*model, evolution_symbol(*model, t, SemigroupKind::heat, 0), L); };
  const auto A = K(0.5), B = K(1.0), C = K(1.5);
  double err = 0.0;
  for (std::size_t m = 0; m < L; ++m)
    for (std::size_t n = 0; n < L; ++n) {
      double s = 0.0;
      for (std::size_t r = 0; r < L; ++r) s += A[m * L + r] * B[r * L + n];
      err = std::max(err, std::abs(s - C[m * L + n]));
    }
  EXPECT_LT(err, 1e-12);
}

TEST(Poisson, PathsAgree) {
  const auto model = build_spectral_model(kChebyshev, 96);
  EXPECT_NEAR(poisson_kernel(*model, 1.0, 0, 0, PoissonPath::direct),
              poisson_kernel(*model, 1.0, 0, 0, PoissonPath::subordination), 1e-8);
  EXPECT_NEAR(poisson_kernel(*model, 0.0, 2, 2, PoissonPath::direct), 1.0, 1e-13);
  EXPECT_NEAR(poisson_kernel(*model, 0.0, 2, 3, PoissonPath::direct), 0.0, 1e-13);
  double prev = 2.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double v = poisson_kernel(*model, t, 4, 4, PoissonPath::direct);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Poisson, SubordinationFactor) {
  const auto model = build_spectral_model({0.0, 0.0}, 64);
  for (double t : {0.5, 1.0, 5.0}) {
    const auto rule = subordination_rule(t, model->lambdas());
    for (double l : model->lambdas()) EXPECT_NEAR(rule.factor(l), std::exp(-t * std::sqrt(l)), 1e-11);
  }
}

TEST(ApplySemigroup, Properties) {
  const auto model = build_spectral_model({0.0, 0.0}, 64);
  const FiniteSequence f{1.0, -0.5, 0.25, 0.0, 2.0};
  const auto f0 = apply_semigroup(*model, f, 0.0, SemigroupKind::heat, 0);
  for (std::size_t n = 0; n < 8; ++n) EXPECT_NEAR(f0[n], f[n], 1e-13);
  for (auto kind : {SemigroupKind::heat, SemigroupKind::poisson}) {
    const auto a = apply_semigroup(*model, apply_semigroup(*model, f, 0.7, kind, 0), 1.3, kind, 0);
    const auto b = apply_semigroup(*model, f, 2.0, kind, 0);
    EXPECT_LT(max_abs_diff(a, b), 1e-12);
    EXPECT_LE(b.norm2(), f.norm2());
  }
}

TEST(KernelGrid, CsvHeader) {
  std::ostringstream os;
  const KernelGridRow rows[] = {{1.0, 0, 1, 0.25, "bessel"}};
  write_kernel_grid_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, 17), "t,m,n,value,path\n");
}
