#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

namespace jlps {

using Complex = std::complex<double>;

/// Finitely supported sequence f(0), f(1), ..., f(size-1); entries past the
/// stored range are zero.
template <class Scalar>
class BasicSequence {
 public:
  using value_type = Scalar;

  BasicSequence() = default;
  explicit BasicSequence(std::size_t size) : entries_(size, Scalar{}) {}
  BasicSequence(std::initializer_list<Scalar> init) : entries_(init) {}
  explicit BasicSequence(std::vector<Scalar> entries) : entries_(std::move(entries)) {}

  static BasicSequence unit(std::size_t index) {
    BasicSequence e(index + 1);
    e[index] = Scalar{1};
    return e;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  Scalar operator[](std::size_t n) const noexcept { return n < entries_.size() ? entries_[n] : Scalar{}; }
  Scalar& operator[](std::size_t n) noexcept { return entries_[n]; }

  std::span<const Scalar> view() const noexcept { return entries_; }
  std::span<Scalar> view() noexcept { return entries_; }
  const std::vector<Scalar>& entries() const noexcept { return entries_; }

  /// Largest index holding a nonzero entry, or -1 for the zero sequence.
  std::ptrdiff_t support() const noexcept {
    for (std::size_t i = entries_.size(); i-- > 0;)
      if (entries_[i] != Scalar{}) return static_cast<std::ptrdiff_t>(i);
    return -1;
  }

  double norm2() const noexcept {
    double s = 0.0;
    for (const auto& v : entries_) s += std::norm(v);
    return std::sqrt(s);
  }

  void resize(std::size_t n) { entries_.resize(n, Scalar{}); }

  BasicSequence& operator*=(Scalar c) {
    for (auto& v : entries_) v *= c;
    return *this;
  }

  friend BasicSequence operator+(const BasicSequence& a, const BasicSequence& b) {
    BasicSequence out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
    return out;
  }
  friend BasicSequence operator-(const BasicSequence& a, const BasicSequence& b) {
    BasicSequence out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return out;
  }
  friend BasicSequence operator*(Scalar c, BasicSequence a) { return a *= c; }

 private:
  std::vector<Scalar> entries_;
};

using FiniteSequence = BasicSequence<double>;
using ComplexSequence = BasicSequence<Complex>;

inline ComplexSequence to_complex(const FiniteSequence& f) {
  ComplexSequence out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

/// max_n |a(n) - b(n)| over the union of the stored ranges.
template <class S>
double max_abs_diff(const BasicSequence<S>& a, const BasicSequence<S>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace jlps
