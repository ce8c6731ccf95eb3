#pragma once

#include "pap/common/rng.hpp"
#include "pap/perception/assignment.hpp"
#include "pap/perception/query_assembly.hpp"
#include "pap/perception/track.hpp"
#include "pap/query/query_bank.hpp"
#include "pap/world/sensor.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pap::perception {

struct PerceptionParams {
  double gate_threshold = 4.0;  // meters
  double alpha = 0.7;           // measurement weight of the center blend
  int confirm_threshold = 2;
  int max_misses = 3;
  double dt = 0.1;
  double world_half_extent = 50.0;  // random queries are drawn in [-h, h]^2

  void validate() const;
};

struct TrackUpdate {
  TrackSet tracks;
  std::vector<query::Query> refined_queries;  // one per live track, ascending id
  std::vector<Detection> detections;          // confirmed, observed this frame
  std::vector<std::uint64_t> terminated;      // ids retired this frame
  Assignment links;                           // random-query detections x unrefreshed tracks
};

/// Applies one frame of query/measurement matches to the track set.
///
///  - a matched Predicted query refreshes its source track with the blend
///    (1 - alpha) * decoded center + alpha * measurement;
///  - measurements won by Random queries are first linked (class-locked,
///    gated, optimal) to live tracks nobody refreshed this frame, using the
///    track's dead-reckoned center as the prior; the rest start tentative
///    tracks carrying the random query's tail;
///  - a track with a single state takes the measurement as-is (no motion prior);
///  - unrefreshed tracks miss: tentative ones terminate, others coast on their
///    velocity until misses exceed max_misses.
///
/// Throws pap::ContractViolation if the assignment indexes outside the inputs,
/// reuses an index, or names an unknown source track.
TrackUpdate update_tracks(TrackSet tracks, const Assignment& assignment, std::span<const query::Query> queries,
                          std::span<const world::Measurement> measurements, std::int64_t frame,
                          const PerceptionParams& params, const query::AffineCodec& codec);

struct PerceptionOutput {
  TrackSet tracks;
  std::vector<Detection> detections;
  std::vector<query::Query> refined_queries;

  // per-frame introspection for counters and debug dumps
  std::vector<query::Query> queries;
  Assignment assignment;
  Assignment links;
  std::size_t cost_evaluations = 0;
  std::size_t gated_pairs = 0;
};

/// assemble_queries -> gate_costs -> associate -> update_tracks for one frame.
PerceptionOutput perceive(std::int64_t frame, std::span<const world::Measurement> measurements,
                          const query::QueryBank& bank, TrackSet tracks, const QueryAssemblyPolicy& policy,
                          const PerceptionParams& params, const query::AffineCodec& codec, Rng& rng);

}  // namespace pap::perception
