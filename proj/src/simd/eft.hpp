#pragma once

#include <cmath>

// Error-free transformations used by the compensated kernels.
namespace jlps::simd::eft {

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double z = s - a;
  e = (a - (s - z)) + (b - z);
}

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

}  // namespace jlps::simd::eft
