#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "jlps/quadrature.hpp"
#include "jlps/semigroups.hpp"

using namespace jlps;

TEST(GaussJacobi, ChebyshevThreePoints) {
  const auto r = gauss_jacobi_rule(kChebyshev, 3);
  ASSERT_EQ(r.size(), 3u);
  const double x[] = {-std::sqrt(3.0) / 2, 0.0, std::sqrt(3.0) / 2};
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(r.nodes[j], x[j], 1e-14);
    EXPECT_NEAR(r.weights[j], std::numbers::pi / 3, 1e-14);
  }
}

TEST(GaussJacobi, ChebyshevClosedFormLarge) {
  const std::size_t L = 300;
  const auto r = gauss_jacobi_rule(kChebyshev, L);
  for (std::size_t j = 0; j < L; ++j) {
    EXPECT_NEAR(r.nodes[j], -std::cos((2.0 * j + 1) * std::numbers::pi / (2.0 * L)), 1e-13);
    EXPECT_NEAR(r.weights[j], std::numbers::pi / L, 1e-13);
  }
}

TEST(GaussJacobi, MassAndOrdering) {
  for (JacobiParams P : {JacobiParams{-0.5, -0.5}, JacobiParams{0, 0}, JacobiParams{0.7, 2.3}, JacobiParams{-0.8, 1.5}}) {
    const auto r = gauss_jacobi_rule(P, 57);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      s += r.weights[j];
      EXPECT_GT(r.weights[j], 0.0);
      if (j) EXPECT_LT(r.nodes[j - 1], r.nodes[j]);
    }
    EXPECT_NEAR(s / P.mass(), 1.0, 1e-13);
  }
  EXPECT_NEAR(kChebyshev.mass(), std::numbers::pi, 1e-14);
}

TEST(GaussJacobi, Exactness) {
  const auto r = gauss_jacobi_rule(kChebyshev, 2);
  EXPECT_NEAR(integrate(r, [](double x) { return x * x; }), std::numbers::pi / 2, 1e-14);
  // Legendre: int x^{2L-2} dx = 2/(2L-1).
  const auto leg = gauss_jacobi_rule({0, 0}, 10);
  EXPECT_NEAR(integrate(leg, [](double x) { return std::pow(x, 18); }), 2.0 / 19.0, 1e-14);
}

TEST(GaussJacobi, ExponentialConverges) {
  for (double t : {0.1, 1.0, 10.0, 50.0}) {
    auto I = [&](std::size_t L) {
      return integrate(gauss_jacobi_rule({0.7, 2.3}, L), [&](double x) { return std::exp(-t * (1 - x)); });
    };
    const double a = I(64), b = I(128);
    EXPECT_LT(std::abs(b - a) / std::abs(b), 1e-10) << t;
  }
}

TEST(SpectralModel, Invariants) {
  const auto m = build_spectral_model({0.7, 2.3}, 128);
  for (double l : m->lambdas()) {
    EXPECT_GT(l, 0.0);
    EXPECT_LT(l, 2.0);
  }
  double defect = 0.0;
  for (std::size_t a = 0; a < 128; ++a)
    for (std::size_t b = 0; b < 128; ++b) {
      double s = 0.0;
      for (std::size_t j = 0; j < 128; ++j) s += m->weights()[j] * m->basis(a, j) * m->basis(b, j);
      defect = std::max(defect, std::abs(s - (a == b)));
    }
  EXPECT_LT(defect, 1e-10);
  const auto K0 = kernel_matrix(*m, evolution_symbol(*m, 0.0, SemigroupKind::heat, 0), 16);
  for (std::size_t a = 0; a < 16; ++a)
    for (std::size_t b = 0; b < 16; ++b) EXPECT_NEAR(K0[a * 16 + b], a == b ? 1.0 : 0.0, 1e-12);
}

TEST(SpectralModel, AnalyzeInvertsSynthesize) {
  const auto m = build_spectral_model({0.0, 0.0}, 40);
  const FiniteSequence f{0.5, -1.0, 0.0, 2.0, 0.25};
  const auto F = m->synthesize_at_nodes(f);
  const auto g = m->analyze(F);
  for (std::size_t n = 0; n < 40; ++n) EXPECT_NEAR(g[n], f[n], 1e-13);
  EXPECT_THROW(m->require_support(40, "test"), IndexError);
}

TEST(SpectralModel, CacheReturnsSameObject) {
  const auto a = cached_model({0.1, 0.2}, 32);
  const auto b = cached_model({0.1, 0.2}, 32);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_NE(a.get(), cached_model({0.1, 0.2}, 64).get());
}
