#include "jlps/bessel.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "jlps/errors.hpp"

namespace jlps {

std::size_t miller_start_index(double t, std::size_t max_order) {
  const double N = static_cast<double>(max_order);
  return max_order + static_cast<std::size_t>(std::ceil(std::sqrt(40.0 * (N + 1.0))) + std::ceil(12.0 * std::sqrt(t))) +
         20;
}

BesselScaledTable::BesselScaledTable(double t, std::size_t max_order) : t_(t), values_(max_order + 1, 0.0) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("bessel_i_scaled: t must be finite and >= 0");
  if (t == 0.0) {
    values_[0] = 1.0;
    return;
  }
  const std::size_t start = miller_start_index(t, max_order);
  constexpr double kBig = 1e250;
  constexpr double kRescale = 1e-250;

  // y_{n-1} = (2n / t) y_n + y_{n+1}, run downward from y_start = tiny.
  double y_next = 0.0;
  double y = 1e-280;
  double sum = 0.0;  // accumulates y_0 + 2 sum_{n >= 1} y_n
  for (std::size_t n = start; n >= 1; --n) {
    if (n <= max_order) values_[n] = y;
    sum += 2.0 * y;
    const double y_prev = (2.0 * static_cast<double>(n) / t) * y + y_next;
    y_next = y;
    y = y_prev;
    if (std::abs(y) > kBig) {
      y *= kRescale;
      y_next *= kRescale;
      sum *= kRescale;
      for (std::size_t k = n; k <= max_order; ++k) values_[k] *= kRescale;
    }
  }
  values_[0] = y;
  sum += y;
  for (double& v : values_) v /= sum;
}

double BesselScaledTable::operator()(long n) const {
  const auto k = static_cast<std::size_t>(std::labs(n));
  if (k >= values_.size()) throw IndexError("Bessel table order " + std::to_string(n) + " out of range");
  return values_[k];
}

}  // namespace jlps
