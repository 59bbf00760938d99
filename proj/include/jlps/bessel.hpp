#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jlps {

/// v_n = e^{-t} I_n(t) for 0 <= n <= N. Values below the double range
/// underflow to zero; everything representable is accurate to ~1e-13
/// relative.
class BesselScaledTable {
 public:
  BesselScaledTable(double t, std::size_t max_order);

  double t() const noexcept { return t_; }
  std::size_t max_order() const noexcept { return values_.size() - 1; }
  /// e^{-t} I_n(t); negative orders use I_{-n} = I_n.
  double operator()(long n) const;
  std::span<const double> values() const noexcept { return values_; }

 private:
  double t_;
  std::vector<double> values_;
};

/// Miller backward recurrence normalized by v_0 + 2 sum_{n>=1} v_n = 1.
inline BesselScaledTable bessel_i_scaled(double t, std::size_t max_order) { return {t, max_order}; }

/// Start index of the backward recurrence for a table up to max_order.
std::size_t miller_start_index(double t, std::size_t max_order);

}  // namespace jlps
