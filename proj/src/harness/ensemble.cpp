#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "jlps/harness.hpp"

namespace jlps::harness {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

FiniteSequence ensemble_member(const EnsembleSpec& spec, std::uint64_t case_id) {
  std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(case_id)));
  // Draw through explicit formulas rather than std distributions, whose
  // output is implementation-defined; streams must match across platforms.
  auto uniform01 = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  auto gaussian = [&] {
    const double u = uniform01(), v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * v);
  };
  const std::size_t support = static_cast<std::size_t>(rng() % (spec.support_max + 1));
  FiniteSequence f(support + 1);
  for (std::size_t i = 0; i <= support; ++i) {
    if (spec.distribution == "rademacher") {
      f[i] = (rng() >> 63) ? 1.0 : -1.0;
    } else if (spec.distribution == "sparse") {
      const bool keep = i == support || uniform01() < spec.sparse_density;
      const double g = gaussian();
      f[i] = keep ? g : 0.0;
    } else {
      f[i] = gaussian();
    }
  }
  if (f[support] == 0.0) f[support] = 1.0;
  return f;
}

std::vector<FiniteSequence> make_ensemble(const EnsembleSpec& spec, std::uint64_t stream) {
  std::vector<FiniteSequence> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(ensemble_member(spec, (stream << 32) | i));
  return out;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace jlps::harness
