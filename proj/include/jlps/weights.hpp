#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jlps/sequence.hpp"

namespace jlps {

/// Strictly positive weight on the naturals.
class DiscreteWeight {
 public:
  enum class Kind { constant, power, tabulated };

  static DiscreteWeight constant(double c = 1.0);
  /// w(n) = (n+1)^s.
  static DiscreteWeight power(double s);
  /// w(n) = table[n]; indices past the table throw IndexError.
  static DiscreteWeight tabulated(std::vector<double> table);
  /// CSV with header and columns n,w; rows must cover 0..N without gaps.
  static DiscreteWeight from_csv(std::istream& is);

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return s_; }
  double operator()(std::size_t n) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  double s_ = 0.0;
  double c_ = 1.0;
  std::vector<double> table_;
};

struct ApThresholds {
  double member_growth = 0.01;     ///< each of the last two doublings below this
  double nonmember_growth = 0.50;  ///< each of the last three doublings above this
  std::size_t doublings = 5;       ///< windows window_max / 2^i, i = 0..doublings
};

enum class ApVerdict { member, nonmember, inconclusive };

const char* verdict_name(ApVerdict v) noexcept;

struct ApReport {
  double p = 2.0;
  std::size_t window_max = 0;
  std::vector<std::size_t> windows;         ///< ascending
  std::vector<double> constant_by_window;   ///< nondecreasing
  ApVerdict verdict = ApVerdict::inconclusive;
};

/// sup over 0 <= n <= m <= W of (m-n+1)^{-p} (sum w)(sum w^{-1/(p-1)})^{p-1},
/// one O(window_max^2) prefix-sum sweep recording every window W in the list.
ApReport ap_constant(const DiscreteWeight& w, double p, std::size_t window_max, const ApThresholds& th = {});

/// (sum_m |f(m)|^p w(m))^{1/p}.
double weighted_norm(const FiniteSequence& f, const DiscreteWeight& w, double p);
double weighted_norm(std::span<const double> f, const DiscreteWeight& w, double p);

}  // namespace jlps
