#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "jlps/errors.hpp"
#include "jlps/quadrature.hpp"
#include "jlps/transplant.hpp"
#include "jlps/weights.hpp"

using namespace jlps;

TEST(Weights, Basics) {
  const auto c = DiscreteWeight::constant();
  const auto p = DiscreteWeight::power(0.5);
  EXPECT_EQ(c(10), 1.0);
  EXPECT_NEAR(p(3), 2.0, 1e-15);
  std::istringstream csv("n,w\n0,1.5\n1,2\n2,0.25\n");
  const auto t = DiscreteWeight::from_csv(csv);
  EXPECT_EQ(t(2), 0.25);
  EXPECT_THROW(DiscreteWeight::tabulated({1.0, 0.0}), DomainError);
}

TEST(WeightedNorm, Values) {
  EXPECT_NEAR(weighted_norm(FiniteSequence::unit(5), DiscreteWeight::power(1.0), 1.0), 6.0, 1e-15);
  FiniteSequence f{3.0, 4.0};
  EXPECT_NEAR(weighted_norm(f, DiscreteWeight::constant(), 2.0), 5.0, 1e-15);
  FiniteSequence g{-1.0, 2.0, 0.5}, h{0.3, -0.7, 4.0};
  const auto w = DiscreteWeight::power(0.7);
  EXPECT_LE(weighted_norm(g + h, w, 3.0), weighted_norm(g, w, 3.0) + weighted_norm(h, w, 3.0));
}

TEST(ApConstant, ConstantWeight) {
  const auto r = ap_constant(DiscreteWeight::constant(), 2.0, 512);
  for (double c : r.constant_by_window) EXPECT_NEAR(c, 1.0, 1e-12);
  EXPECT_EQ(r.verdict, ApVerdict::member);
}

TEST(ApConstant, PowerWeights) {
  const auto in = ap_constant(DiscreteWeight::power(0.5), 2.0, 4096);
  EXPECT_EQ(in.verdict, ApVerdict::member);
  const auto out = ap_constant(DiscreteWeight::power(2.0), 2.0, 4096);
  EXPECT_EQ(out.verdict, ApVerdict::nonmember);
  for (std::size_t i = 1; i < out.constant_by_window.size(); ++i)
    EXPECT_GE(out.constant_by_window[i], out.constant_by_window[i - 1]);
  EXPECT_THROW(ap_constant(DiscreteWeight::constant(), 1.0, 64), DomainError);
}

TEST(Transplant, KernelProperties) {
  const JacobiParams a{-0.5, -0.5}, b{0.5, 0.5}, c{0.7, 2.3};
  for (std::size_t n = 0; n < 6; ++n)
    for (std::size_t m = 0; m < 6; ++m) {
      EXPECT_NEAR(transplantation_kernel(c, c, n, m), n == m ? 1.0 : 0.0, 1e-10);
      EXPECT_NEAR(transplantation_kernel(a, c, n, m), transplantation_kernel(c, a, m, n), 1e-12);
    }
  const double k1 = transplantation_kernel(a, b, 0, 0, 64), k2 = transplantation_kernel(a, b, 0, 0, 128);
  EXPECT_LT(std::abs(k1 - k2), 1e-10);
  EXPECT_NEAR(mixed_params(a, c).alpha, 0.1, 1e-15);
  EXPECT_NEAR(mixed_params(a, c).beta, 0.9, 1e-15);
}

TEST(Transplant, StableForSmallIndices) {
  const JacobiParams src{3.0, -0.5}, dst{-0.5, 2.0};
  for (std::size_t n : {0u, 7u, 32u})
    for (std::size_t m : {0u, 16u, 32u}) {
      const double a = transplantation_kernel(src, dst, n, m);
      const double b = transplantation_kernel(src, dst, n, m, 1024);
      EXPECT_NEAR(a, b, 1e-10);
    }
}

TEST(Transplant, Apply) {
  const FiniteSequence f{0.5, -1.0, 0.25, 0.0, 1.0};
  const auto id = apply_transplantation({0.7, 2.3}, {0.7, 2.3}, f, 16);
  for (std::size_t n = 0; n < 16; ++n) EXPECT_NEAR(id.values[n], f[n], 1e-10);
  const auto r = apply_transplantation({0.0, 0.0}, {-0.5, -0.5}, f, 64);
  EXPECT_TRUE(r.stable);
  const double ratio = r.values.norm2() / f.norm2();
  EXPECT_GT(ratio, 0.9);
  EXPECT_LT(ratio, 1.1);
  const auto r2 = apply_transplantation({0.0, 0.0}, {-0.5, -0.5}, 2.0 * f, 64);
  for (std::size_t n = 0; n < 64; ++n) EXPECT_NEAR(r2.values[n], 2.0 * r.values[n], 1e-13);
}

TEST(Composition, Chebyshev) {
  const auto rep = composition_check(kChebyshev, FiniteSequence{1.0, 0.5, -0.25}, 1, {0.5, 1.0});
  EXPECT_LT(rep.final_discrepancy, 1e-10);
}

TEST(Composition, LegendreConverges) {
  const auto rep = composition_check({0.0, 0.0}, FiniteSequence::unit(0), 1, {1.0}, 16, 1e-10, 1024);
  EXPECT_TRUE(rep.monotone);
  EXPECT_LT(rep.final_discrepancy, 1e-6);
  const auto scaled = composition_check({0.0, 0.0}, 3.0 * FiniteSequence::unit(0), 1, {1.0}, 16, 1e-10, 1024);
  EXPECT_NEAR(scaled.final_discrepancy, 3.0 * rep.final_discrepancy, 1e-12 + 1e-6 * rep.final_discrepancy);
}
