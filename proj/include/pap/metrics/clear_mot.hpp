#pragma once

#include "pap/common/geometry.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace pap::metrics {

struct GtBox {
  std::uint64_t id = 0;
  Vec2 center;
};

struct Hypothesis {
  std::uint64_t track_id = 0;
  Vec2 center;
  double confidence = 1.0;
};

struct FrameEvents {
  std::int64_t frame = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t ids = 0;
  std::vector<double> tp_distances;
};

/// Ground-truth id -> track id it was last matched to.
using MatchMemory = std::map<std::uint64_t, std::uint64_t>;

/// Extra cost on pairs that do not continue a remembered match, so equal
/// distances resolve in favour of continuity.
inline constexpr double kContinuityBias = 1e-9;

/// CLEAR-MOT events for one frame: optimal one-to-one GT/hypothesis
/// matching under a center-distance gate. An identity switch is counted
/// when a GT object is matched to a different track than at its previous
/// matched frame. Updates `memory` with this frame's matches.
FrameEvents match_frame(std::span<const GtBox> gt, std::span<const Hypothesis> hyps, double match_distance,
                        MatchMemory& memory, std::int64_t frame = 0);

}  // namespace pap::metrics
