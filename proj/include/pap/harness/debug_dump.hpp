#pragma once

#include "pap/metrics/report.hpp"
#include "pap/perception/assignment.hpp"
#include "pap/perception/track.hpp"
#include "pap/prediction/forecast.hpp"
#include "pap/world/sensor.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace pap::harness {

struct QueryRecord {
  query::Provenance provenance = query::Provenance::Random;
  std::optional<std::uint64_t> source_track_id;
  int horizon_step = 0;
  std::optional<ObjectClass> object_class;
  Vec2 center;  // decoded reference point
  double confidence = 0.0;
};

struct TrackRecord {
  std::uint64_t track_id = 0;
  ObjectClass object_class = ObjectClass::Car;
  perception::TrackStatus status = perception::TrackStatus::Tentative;
  Vec2 center;
  Vec2 velocity;
  int hits = 0;
  int misses = 0;
  bool coasted = false;
};

struct FrameTrace {
  std::int64_t frame = 0;
  std::vector<QueryRecord> queries;
  perception::Assignment assignment;
  std::vector<TrackRecord> tracks;
  std::vector<prediction::Forecast> forecasts;
  std::vector<world::Measurement> measurements;
  std::vector<perception::Detection> detections;
  std::vector<world::GroundTruthObject> ground_truth;
};

/// A run's full frame-by-frame record. The header carries what replay needs
/// besides the frames: gate threshold, metric parameters, counters, the
/// measurement hash and the config echo.
struct RunTrace {
  double gate_threshold = 0.0;
  metrics::MetricParams metric_params;
  metrics::Counters counters;
  std::string measurement_hash;
  nlohmann::json config_echo = nlohmann::json::object();
  std::vector<FrameTrace> frames;
};

/// JSON lines: one header object ({"type": "header", ...}) followed by one
/// object per frame with keys frame, queries, assignment, tracks, forecasts,
/// measurements, detections, ground_truth. Throws pap::IoError.
void write_dump(const RunTrace& trace, const std::filesystem::path& path);
void write_dump(const RunTrace& trace, std::ostream& out);

/// Throws pap::IoError if unreadable and pap::ConfigError if malformed.
RunTrace read_dump(const std::filesystem::path& path);
RunTrace read_dump(std::istream& in);

/// Rebuilds the run's report from the trace alone. Counters other than
/// wall time are recomputed from the recorded queries and measurements and
/// must agree with the header, as must the measurement hash; a mismatch
/// throws pap::ContractViolation.
metrics::TrackingReport replay(const RunTrace& trace);

nlohmann::json frame_to_json(const FrameTrace& f);
FrameTrace frame_from_json(const nlohmann::json& doc);

}  // namespace pap::harness
