#pragma once

#include <stdexcept>
#include <string>

namespace jlps {

/// Parameter outside the admissible range (alpha <= -1, t < 0, p <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Index, support or table-size violation.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// An iterative or quadrature procedure missed its tolerance. Carries the
/// error estimate that was reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Invariant violation inside a numerical routine that should never fail.
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jlps
