#pragma once

#include "pap/perception/assignment.hpp"
#include "pap/query/query.hpp"
#include "pap/world/sensor.hpp"

#include <span>

namespace pap::perception {

/// Cost subtracted from Predicted-query entries so a predicted query wins a
/// measurement it ties with a random query.
inline constexpr double kPredictedPriority = 1e-6;

struct GateResult {
  CostMatrix costs;             // queries x measurements
  std::size_t evaluations = 0;  // distance evaluations performed (class-compatible pairs)
  std::size_t gated_pairs = 0;  // entries that passed the gate
};

/// cost[i][j] = |decode(q_i) - m_j| when class-compatible and within
/// `gate_threshold`, else kForbidden. Random queries are compatible with
/// every class; Predicted queries only with their own track's class, and
/// their finite costs are reduced by kPredictedPriority (floored at 0).
GateResult gate_costs(std::span<const query::Query> queries, std::span<const world::Measurement> measurements,
                      const query::AffineCodec& codec, double gate_threshold);

}  // namespace pap::perception
