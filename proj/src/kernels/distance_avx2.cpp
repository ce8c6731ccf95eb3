#include "pap/kernels/distance.hpp"

#include <immintrin.h>

#include <bit>
#include <cmath>
#include <limits>

namespace pap::kernels {

std::size_t gated_distance_row_avx2(Vec2 origin, std::span<const double> xs,
                                    std::span<const double> ys, double gate,
                                    std::span<double> out) noexcept {
  const std::size_t n = xs.size();
  const __m256d ox = _mm256_set1_pd(origin.x);
  const __m256d oy = _mm256_set1_pd(origin.y);
  const __m256d vgate = _mm256_set1_pd(gate);
  const __m256d vinf = _mm256_set1_pd(std::numeric_limits<double>::infinity());

  std::size_t finite = 0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + j), ox);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + j), oy);
    // separate mul/add to match the scalar rounding sequence exactly
    const __m256d sq = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d d = _mm256_sqrt_pd(sq);
    const __m256d inside = _mm256_cmp_pd(d, vgate, _CMP_LE_OQ);
    _mm256_storeu_pd(out.data() + j, _mm256_blendv_pd(vinf, d, inside));
    finite += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(inside))));
  }
  if (j < n) {
    finite += gated_distance_row_scalar(origin, xs.subspan(j), ys.subspan(j), gate, out.subspan(j));
  }
  return finite;
}

}  // namespace pap::kernels
