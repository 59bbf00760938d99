#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "jlps/simd.hpp"

namespace jlps::simd {

const char* isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(JLPS_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(JLPS_WITH_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() noexcept {
  if (const char* env = std::getenv("JLPS_SIMD")) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
    if (v == "neon" && isa_available(Isa::neon)) return Isa::neon;
  }
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

const Kernels& kernels_for(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument(std::string("SIMD variant not available: ") + isa_name(isa));
  switch (isa) {
#if defined(JLPS_WITH_AVX2)
    case Isa::avx2: return detail::avx2_kernels();
#endif
#if defined(JLPS_WITH_NEON)
    case Isa::neon: return detail::neon_kernels();
#endif
    default: return detail::scalar_kernels();
  }
}

namespace {

std::atomic<const Kernels*>& table() {
  static std::atomic<const Kernels*> t{&kernels_for(detect_isa())};
  return t;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect_isa()};
  return isa;
}

}  // namespace

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  const Kernels& k = kernels_for(isa);
  table().store(&k, std::memory_order_release);
  current().store(isa, std::memory_order_relaxed);
}

const Kernels& kernels() noexcept { return *table().load(std::memory_order_acquire); }

double quad_form(std::span<const double> H, std::span<const double> v) {
  const std::size_t n = v.size();
  if (H.size() < n * n) throw std::invalid_argument("quad_form: matrix smaller than vector");
  const Kernels& k = kernels();
  std::vector<double> y(n);
  for (std::size_t r = 0; r < n; ++r) y[r] = k.dot_compensated(H.data() + r * n, v.data(), n);
  return k.dot_compensated(v.data(), y.data(), n);
}

}  // namespace jlps::simd
