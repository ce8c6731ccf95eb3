#include "pap/perception/gating.hpp"

#include "pap/common/errors.hpp"
#include "pap/kernels/distance.hpp"

#include <algorithm>
#include <array>

namespace pap::perception {

GateResult gate_costs(std::span<const query::Query> queries, std::span<const world::Measurement> measurements,
                      const query::AffineCodec& codec, double gate_threshold) {
  const std::size_t m = measurements.size();
  GateResult result{CostMatrix(queries.size(), m), 0, 0};
  if (m == 0 || queries.empty()) return result;

  // SoA copies: all measurements, and one bucket per class for class-locked rows
  std::vector<double> xs(m), ys(m);
  std::array<std::vector<std::size_t>, kAllClasses.size()> bucket_index;
  std::array<std::vector<double>, kAllClasses.size()> bucket_x, bucket_y;
  for (std::size_t j = 0; j < m; ++j) {
    xs[j] = measurements[j].center.x;
    ys[j] = measurements[j].center.y;
    const auto c = static_cast<std::size_t>(measurements[j].object_class);
    bucket_index[c].push_back(j);
    bucket_x[c].push_back(xs[j]);
    bucket_y[c].push_back(ys[j]);
  }

  std::vector<double> scratch(m);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const query::Query& q = queries[i];
    const Vec2 center = codec.decode_reference(q).center;
    double* row = result.costs.row(i);

    if (!q.is_predicted()) {
      result.gated_pairs += kernels::gated_distance_row(center, xs, ys, gate_threshold, std::span<double>(row, m));
      result.evaluations += m;
      continue;
    }

    if (!q.object_class) throw ContractViolation("gate_costs: predicted query without class");
    const auto c = static_cast<std::size_t>(*q.object_class);
    const std::size_t n = bucket_index[c].size();
    result.gated_pairs += kernels::gated_distance_row(center, bucket_x[c], bucket_y[c], gate_threshold,
                                                      std::span<double>(scratch.data(), n));
    result.evaluations += n;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = scratch[k];
      row[bucket_index[c][k]] = d == kForbidden ? kForbidden : std::max(0.0, d - kPredictedPriority);
    }
  }
  return result;
}

}  // namespace pap::perception
