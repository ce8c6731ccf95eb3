#pragma once

#include "pap/common/geometry.hpp"

#include <cstddef>
#include <span>
#include <string_view>

namespace pap::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Variant used by the dispatching entry points. Chosen once, on first use:
/// the best available ISA, unless the environment variable PAP_KERNEL_ISA
/// is set to "scalar".
Isa active_isa() noexcept;

/// Overrides the dispatch choice (tests and benchmarks). Throws
/// std::invalid_argument if `isa` is not available.
void set_active_isa(Isa isa);

/// Gated Euclidean distances from `origin` to each point (xs[j], ys[j]).
///
/// out[j] = |origin - p_j| when that distance is <= gate, +inf otherwise
/// (NaN inputs also map to +inf). Returns the number of finite outputs.
/// All variants produce bit-identical results: no FMA, correctly rounded sqrt.
std::size_t gated_distance_row(Vec2 origin, std::span<const double> xs, std::span<const double> ys,
                               double gate, std::span<double> out);

std::size_t gated_distance_row_scalar(Vec2 origin, std::span<const double> xs,
                                      std::span<const double> ys, double gate,
                                      std::span<double> out) noexcept;

#if defined(PAP_HAVE_AVX2)
std::size_t gated_distance_row_avx2(Vec2 origin, std::span<const double> xs,
                                    std::span<const double> ys, double gate,
                                    std::span<double> out) noexcept;
#endif

}  // namespace pap::kernels
