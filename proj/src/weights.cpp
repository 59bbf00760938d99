#include "jlps/weights.hpp"

#include <cmath>
#include <istream>
#include <sstream>

#include "jlps/errors.hpp"

namespace jlps {

DiscreteWeight DiscreteWeight::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("constant weight must be positive");
  DiscreteWeight w;
  w.kind_ = Kind::constant;
  w.c_ = c;
  return w;
}

DiscreteWeight DiscreteWeight::power(double s) {
  if (!std::isfinite(s)) throw DomainError("power weight exponent must be finite");
  DiscreteWeight w;
  w.kind_ = Kind::power;
  w.s_ = s;
  return w;
}

DiscreteWeight DiscreteWeight::tabulated(std::vector<double> table) {
  if (table.empty()) throw DomainError("tabulated weight is empty");
  for (double v : table)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("tabulated weight must be strictly positive");
  DiscreteWeight w;
  w.kind_ = Kind::tabulated;
  w.table_ = std::move(table);
  return w;
}

DiscreteWeight DiscreteWeight::from_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("weight CSV is empty");
  std::vector<double> table;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) throw DomainError("weight CSV row needs n,w: " + line);
    const long n = std::stol(a);
    if (n != static_cast<long>(table.size())) throw DomainError("weight CSV rows must list n = 0, 1, 2, ... in order");
    table.push_back(std::stod(b));
  }
  return tabulated(std::move(table));
}

double DiscreteWeight::operator()(std::size_t n) const {
  switch (kind_) {
    case Kind::constant: return c_;
    case Kind::power: return std::pow(static_cast<double>(n) + 1.0, s_);
    case Kind::tabulated:
      if (n >= table_.size()) throw IndexError("tabulated weight has no entry for n = " + std::to_string(n));
      return table_[n];
  }
  return 1.0;
}

std::string DiscreteWeight::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant: os << "constant(" << c_ << ")"; break;
    case Kind::power: os << "power(" << s_ << ")"; break;
    case Kind::tabulated: os << "tabulated[" << table_.size() << "]"; break;
  }
  return os.str();
}

const char* verdict_name(ApVerdict v) noexcept {
  switch (v) {
    case ApVerdict::member: return "member";
    case ApVerdict::nonmember: return "nonmember";
    case ApVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

ApReport ap_constant(const DiscreteWeight& w, double p, std::size_t window_max, const ApThresholds& th) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("A_p needs 1 < p < inf");
  if (window_max < 1) throw DomainError("A_p window must be >= 1");
  ApReport rep;
  rep.p = p;
  rep.window_max = window_max;
  for (std::size_t i = th.doublings + 1; i-- > 0;) {
    const std::size_t W = window_max >> i;
    if (W >= 1 && (rep.windows.empty() || rep.windows.back() != W)) rep.windows.push_back(W);
  }
  const std::size_t N = window_max + 1;
  const double q = -1.0 / (p - 1.0);
  std::vector<double> A(N + 1, 0.0), B(N + 1, 0.0), len_pow(N + 1, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    const double v = w(n);
    A[n + 1] = A[n] + v;
    B[n + 1] = B[n] + std::pow(v, q);
  }
  for (std::size_t l = 1; l <= N; ++l) len_pow[l] = std::pow(static_cast<double>(l), -p);
  double best = 0.0;
  std::size_t next = 0;
  for (std::size_t m = 0; m < N; ++m) {
    for (std::size_t n = 0; n <= m; ++n) {
      const double sa = A[m + 1] - A[n], sb = B[m + 1] - B[n];
      best = std::max(best, len_pow[m - n + 1] * sa * std::pow(sb, p - 1.0));
    }
    while (next < rep.windows.size() && rep.windows[next] == m) {
      rep.constant_by_window.push_back(best);
      ++next;
    }
  }
  const auto& c = rep.constant_by_window;
  auto growth = [&](std::size_t i) { return c[i] / c[i - 1] - 1.0; };
  const std::size_t K = c.size();
  if (K >= 3 && growth(K - 1) < th.member_growth && growth(K - 2) < th.member_growth)
    rep.verdict = ApVerdict::member;
  else if (K >= 4 && growth(K - 1) > th.nonmember_growth && growth(K - 2) > th.nonmember_growth &&
           growth(K - 3) > th.nonmember_growth)
    rep.verdict = ApVerdict::nonmember;
  return rep;
}

double weighted_norm(std::span<const double> f, const DiscreteWeight& w, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("weighted norm needs 1 <= p < inf");
  double s = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m)
    if (f[m] != 0.0) s += std::pow(std::abs(f[m]), p) * w(m);
  return std::pow(s, 1.0 / p);
}

double weighted_norm(const FiniteSequence& f, const DiscreteWeight& w, double p) {
  return weighted_norm(f.view(), w, p);
}

}  // namespace jlps
