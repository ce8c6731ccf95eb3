#include "pap/kernels/distance.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace pap::kernels {
namespace {

Isa detect() noexcept {
  if (const char* env = std::getenv("PAP_KERNEL_ISA"); env != nullptr && std::string(env) == "scalar") {
    return Isa::Scalar;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& selected() noexcept {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(PAP_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept { return selected().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel ISA not available: " + std::string(to_string(isa)));
  }
  selected().store(isa, std::memory_order_relaxed);
}

std::size_t gated_distance_row(Vec2 origin, std::span<const double> xs, std::span<const double> ys,
                               double gate, std::span<double> out) {
  if (ys.size() != xs.size() || out.size() < xs.size()) {
    throw std::invalid_argument("gated_distance_row: mismatched span sizes");
  }
#if defined(PAP_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return gated_distance_row_avx2(origin, xs, ys, gate, out);
#endif
  return gated_distance_row_scalar(origin, xs, ys, gate, out);
}

}  // namespace pap::kernels
