#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "jlps/errors.hpp"
#include "jlps/jacobi.hpp"
#include "jlps/quadrature.hpp"

using namespace jlps;

namespace {
const JacobiParams kParams[] = {{-0.5, -0.5}, {0.0, 0.0}, {0.7, 2.3}};
}

TEST(CoeffTable, ChebyshevValues) {
  const auto t = build_coeff_table(kChebyshev, 40);
  EXPECT_NEAR(t.a(0), 1.0 / std::numbers::sqrt2, 1e-15);
  for (std::size_t n = 1; n <= 40; ++n) EXPECT_NEAR(t.a(n), 0.5, 1e-15) << n;
  for (std::size_t n = 0; n <= 40; ++n) EXPECT_EQ(t.b(n), 0.0);
}

TEST(CoeffTable, SymmetricParamsHaveZeroDiagonal) {
  const auto t = build_coeff_table({1.3, 1.3}, 100);
  for (double b : t.b()) EXPECT_EQ(b, 0.0);
}

TEST(CoeffTable, Asymptotics) {
  for (const auto& P : kParams) {
    const auto t = build_coeff_table(P, 512);
    for (std::size_t n = 0; n <= 512; ++n) {
      EXPECT_GT(t.a(n), 0.0);
      EXPECT_LT(std::abs(t.b(n)), 1.0);
      if (n >= 64) {
        EXPECT_LE(std::abs(t.a(n) - 0.5), 10.0 / n);
        EXPECT_LE(std::abs(t.b(n)), 10.0 / n);
      }
    }
  }
}

TEST(CoeffTable, RejectsBadParams) {
  EXPECT_THROW(build_coeff_table({-1.0, 0.0}, 4), DomainError);
  EXPECT_THROW(build_coeff_table({0.0, -1.5}, 4), DomainError);
}

TEST(EvalPoly, ChebyshevClosedForm) {
  const auto t = build_coeff_table(kChebyshev, 64);
  EXPECT_NEAR(eval_poly(t, 0, 0.3), 0.5641895835, 1e-10);
  EXPECT_NEAR(eval_poly(t, 2, 0.5), -0.3989422804, 1e-10);
  for (double x : {-0.9, -0.2, 0.4, 0.95}) {
    const double th = std::acos(x);
    for (std::size_t n = 1; n <= 64; ++n)
      EXPECT_NEAR(eval_poly(t, n, x), std::sqrt(2.0 / std::numbers::pi) * std::cos(n * th), 1e-12);
  }
  EXPECT_THROW(eval_poly(t, 65, 0.0), IndexError);
}

TEST(EvalPoly, RecurrenceResidual) {
  for (const auto& P : kParams) {
    const auto t = build_coeff_table(P, 130);
    std::vector<double> p(130);
    for (int i = 0; i < 100; ++i) {
      const double x = -1.0 + 2.0 * i / 99.0;
      eval_polys(t, x, p);
      double scale = 0.0;
      for (double v : p) scale = std::max(scale, std::abs(v));
      for (std::size_t n = 1; n + 1 < p.size(); ++n) {
        const double r = t.a(n - 1) * p[n - 1] + t.b(n) * p[n] + t.a(n) * p[n + 1] - x * p[n];
        EXPECT_LE(std::abs(r), 1e-11 * scale);
      }
    }
  }
}

TEST(EvalPoly, GramMatrixIsIdentity) {
  for (const auto& P : kParams) {
    const std::size_t N = 128;
    const auto rule = gauss_jacobi_rule(P, N + 1);
    const auto t = build_coeff_table(P, N);
    std::vector<std::vector<double>> vals(rule.size(), std::vector<double>(N + 1));
    for (std::size_t j = 0; j < rule.size(); ++j) eval_polys(t, rule.nodes[j], vals[j]);
    double defect = 0.0;
    for (std::size_t m = 0; m <= N; ++m)
      for (std::size_t n = m; n <= N; ++n) {
        double s = 0.0;
        for (std::size_t j = 0; j < rule.size(); ++j) s += rule.weights[j] * vals[j][m] * vals[j][n];
        defect = std::max(defect, std::abs(s - (m == n ? 1.0 : 0.0)));
      }
    EXPECT_LT(defect, 1e-10);
  }
}

TEST(ApplyJacobi, UnitVector) {
  const auto t = build_coeff_table(kChebyshev, 8);
  const auto Jf = apply_jacobi(t, FiniteSequence::unit(0), false);
  EXPECT_NEAR(Jf[0], 0.0, 1e-16);
  EXPECT_NEAR(Jf[1], 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_EQ(Jf[2], 0.0);
  const auto Sf = apply_jacobi(t, FiniteSequence::unit(0), true);
  EXPECT_NEAR(Sf[0], -1.0, 1e-15);
  EXPECT_NEAR(Sf[1], 1.0 / std::numbers::sqrt2, 1e-15);
}

TEST(ApplyJacobi, EigenvectorsOfTruncation) {
  const std::size_t L = 24;
  for (const auto& P : kParams) {
    const auto model = build_spectral_model(P, L);
    const auto t = build_coeff_table(P, L + 2);
    for (std::size_t j = 0; j < L; ++j) {
      FiniteSequence v(L);
      for (std::size_t m = 0; m < L; ++m) v[m] = model->basis(m, j);
      const auto Jv = apply_jacobi(t, v, false);
      for (std::size_t n = 0; n + 1 < L; ++n) EXPECT_NEAR(Jv[n], model->nodes()[j] * v[n], 1e-12);
    }
  }
}

TEST(ApplyJacobi, TableTooSmall) {
  const auto t = build_coeff_table(kChebyshev, 4);
  EXPECT_THROW(apply_jacobi(t, FiniteSequence::unit(4), false), IndexError);
}

TEST(Synthesize, ParsevalAndPlancherel) {
  for (const auto& P : kParams) {
    const auto t = build_coeff_table(P, 64);
    const auto rule = gauss_jacobi_rule(P, 40);
    FiniteSequence f(33), g(33);
    for (std::size_t i = 0; i <= 32; ++i) {
      f[i] = std::sin(1.0 + i);
      g[i] = std::cos(0.3 * i * i);
    }
    double fg = 0.0, ff = 0.0;
    for (std::size_t i = 0; i <= 32; ++i) {
      fg += f[i] * g[i];
      ff += f[i] * f[i];
    }
    const double q = integrate(rule, [&](double x) { return synthesize(t, f, x) * synthesize(t, g, x); });
    const double qq = integrate(rule, [&](double x) { return std::pow(synthesize(t, f, x), 2); });
    EXPECT_NEAR(q, fg, 1e-10);
    EXPECT_NEAR(std::sqrt(qq) / std::sqrt(ff), 1.0, 1e-10);
    EXPECT_NEAR(synthesize(t, FiniteSequence::unit(0), 0.17), t.w(0), 1e-15);
  }
}
