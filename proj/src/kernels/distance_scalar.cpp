#include "pap/kernels/distance.hpp"

#include <cmath>
#include <limits>

namespace pap::kernels {

std::size_t gated_distance_row_scalar(Vec2 origin, std::span<const double> xs,
                                      std::span<const double> ys, double gate,
                                      std::span<double> out) noexcept {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::size_t finite = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double dx = xs[j] - origin.x;
    const double dy = ys[j] - origin.y;
    const double sq = dx * dx;
    const double d = std::sqrt(sq + dy * dy);
    if (d <= gate) {
      out[j] = d;
      ++finite;
    } else {
      out[j] = kInf;
    }
  }
  return finite;
}

}  // namespace pap::kernels
