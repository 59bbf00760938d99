#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "jlps/errors.hpp"
#include "jlps/harness.hpp"
#include "jlps/multipliers.hpp"
#include "jlps/quadrature.hpp"

using namespace jlps;

namespace {
FiniteSequence sample() { return FiniteSequence{1.0, -2.0, 0.5, 0.0, 0.75, -0.1, 0.3}; }
}

TEST(ComplexGamma, ReflectionModulus) {
  for (double g : {0.5, 1.0, 3.0}) {
    const double m2 = std::norm(complex_gamma({1.0, -g}));
    EXPECT_NEAR(m2, std::numbers::pi * g / std::sinh(std::numbers::pi * g), 1e-13);
  }
  EXPECT_NEAR(std::abs(complex_gamma({5.0, 0.0}) - 24.0), 0.0, 1e-11);
  EXPECT_NEAR(complex_gamma({0.5, 0.0}).real(), std::sqrt(std::numbers::pi), 1e-14);
}

TEST(LaplaceSymbol, ClosedForms) {
  for (double x : {0.01, 0.3, 1.0, 2.0}) EXPECT_NEAR(std::abs(laplace_symbol(density_one(), x) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(laplace_symbol(density_exp(), 1.0) - 0.5), 0.0, 1e-12);
  const auto step = density_step(1.5);
  for (double x : {0.1, 1.0, 1.9}) EXPECT_NEAR(std::abs(laplace_symbol(step, x) + std::expm1(-1.5 * x)), 0.0, 1e-12);
  const auto pw = density_power(1.0);
  for (double x : {0.05, 0.5, 1.7}) {
    const Complex M = laplace_symbol(pw, x);
    EXPECT_NEAR(std::abs(M - std::pow(Complex(x), Complex(0.0, 1.0))), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(M), 1.0, 1e-10);
  }
}

TEST(ApplyMultiplier, IdentityAndBounds) {
  const auto model = build_spectral_model({0.7, 2.3}, 64);
  const auto f = sample();
  const auto one = apply_multiplier(*model, MultiplierSymbol::laplace(density_one()), f);
  for (std::size_t n = 0; n < 64; ++n) EXPECT_NEAR(std::abs(one.values[n] - f[n]), 0.0, 1e-13);
  EXPECT_FALSE(one.truncated);
  const auto ex = apply_multiplier(*model, MultiplierSymbol::laplace(density_exp()), f);
  EXPECT_LE(ex.values.norm2(), 2.0 / 3.0 * f.norm2());
  const auto sym = MultiplierSymbol::tabulated([](double x) { return Complex(std::cos(7 * x), std::sin(x)); });
  EXPECT_LE(apply_multiplier(*model, sym, f).values.norm2(), std::sqrt(2.0) * f.norm2() + 1e-12);
  const auto bad = MultiplierSymbol::tabulated([](double) { return Complex(NAN, 0); });
  EXPECT_THROW(apply_multiplier(*model, bad, f), NumericalFault);
}

TEST(ApplyMultiplier, Composition) {
  const auto model = build_spectral_model({0.0, 0.0}, 48);
  const auto f = sample();
  const auto M1 = [](double x) { return Complex(x / (1 + x)); };
  const auto M2 = [](double x) { return std::pow(Complex(x), Complex(0, 2.0)); };
  const auto a = apply_multiplier(*model, MultiplierSymbol::tabulated(M1), f).values;
  const auto b = apply_multiplier(*model, MultiplierSymbol::tabulated([&](double x) { return M1(x) * M2(x); }), f).values;
  // T_{M2} applied to a complex sequence: split real and imaginary parts.
  FiniteSequence re(a.size()), im(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    re[n] = a[n].real();
    im[n] = a[n].imag();
  }
  const auto s2 = MultiplierSymbol::tabulated(M2);
  const auto c = apply_multiplier(*model, s2, re).values;
  const auto d = apply_multiplier(*model, s2, im).values;
  for (std::size_t n = 0; n < 48; ++n) EXPECT_NEAR(std::abs(c[n] + Complex(0, 1) * d[n] - b[n]), 0.0, 1e-12);
}

TEST(ImaginaryPower, Isometry) {
  const auto model = build_spectral_model({0.7, 2.3}, 64);
  const auto f = sample();
  for (double g : {0.5, 1.0, 3.0}) {
    const auto out = apply_multiplier(*model, MultiplierSymbol::imaginary_power(g), f);
    EXPECT_NEAR(out.values.norm2() / f.norm2(), 1.0, 1e-12);
  }
}

TEST(HeatPath, AgreesWithSpectralPath) {
  const auto model = build_spectral_model({0.7, 2.3}, 64);
  const auto f = sample();
  const auto one = laplace_multiplier_heatpath(*model, density_one(), f);
  for (std::size_t n = 0; n < 64; ++n) EXPECT_NEAR(std::abs(one[n] - f[n]), 0.0, 1e-10);
  for (const auto& d : {density_exp(), density_step(1.0), density_power(1.0)}) {
    const auto a = apply_multiplier(*model, MultiplierSymbol::laplace(d), f).values;
    const auto b = laplace_multiplier_heatpath(*model, d, f);
    EXPECT_LT(max_abs_diff(a, b), 1e-8) << d.name;
  }
  // Linearity.
  const auto twice = laplace_multiplier_heatpath(*model, density_exp(), 2.0 * f);
  const auto once = laplace_multiplier_heatpath(*model, density_exp(), f);
  for (std::size_t n = 0; n < 64; ++n) EXPECT_NEAR(std::abs(twice[n] - 2.0 * once[n]), 0.0, 1e-13);
}

TEST(GkBound, FiniteAndHomogeneous) {
  const auto model = build_spectral_model({0.0, 0.0}, 80);
  harness::EnsembleSpec spec;
  spec.count = 20;
  const auto ens = harness::make_ensemble(spec);
  const auto r1 = gk_multiplier_bound_check(model, MultiplierSymbol::laplace(density_exp()), ens);
  EXPECT_TRUE(std::isfinite(r1.R));
  EXPECT_EQ(r1.hard_failures, 0u);
  auto scaled = density_exp();
  const auto base = scaled.a;
  scaled.a = [base](double t) { return 3.0 * base(t); };
  scaled.exact = nullptr;
  scaled.sup_bound = 3.0;
  const auto r3 = gk_multiplier_bound_check(model, MultiplierSymbol::laplace(scaled), ens);
  EXPECT_NEAR(r3.R / r1.R, 3.0, 1e-8);
}

TEST(Marcinkiewicz, Constants) {
  const auto one = marcinkiewicz_check(MultiplierSymbol::laplace(density_one()), 3);
  EXPECT_NEAR(one.constants[0], 1.0, 1e-12);
  for (int k = 1; k <= 3; ++k) EXPECT_LT(one.constants[k], 1e-8);
  const auto ip = marcinkiewicz_check(MultiplierSymbol::imaginary_power(1.0), 1);
  EXPECT_NEAR(ip.constants[1], 1.0, 1e-6);
  // sup x * d/dx (x/(1+x)) = sup x/(1+x)^2 = 1/4 at x = 1.
  const auto ex = marcinkiewicz_check(MultiplierSymbol::laplace(density_exp()), 1);
  EXPECT_NEAR(ex.constants[1], 0.25, 1e-4);
}
