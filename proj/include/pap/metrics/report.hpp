#pragma once

#include "pap/common/object_class.hpp"
#include "pap/metrics/amota.hpp"
#include "pap/perception/track.hpp"
#include "pap/world/scenario.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pap::metrics {

struct MetricSummary {
  double amota = 0.0;
  double amotp = 0.0;
  double recall = 0.0;
  std::int64_t ids = 0;
  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

/// Stand-ins for the timing columns of a results table. wall_seconds and
/// fps are machine-dependent; every other field is deterministic.
struct Counters {
  std::int64_t frames = 0;
  double wall_seconds = 0.0;
  double fps = 0.0;
  std::uint64_t query_refinements = 0;  // queries processed by perception
  std::uint64_t cost_evaluations = 0;   // query/measurement distances evaluated
  std::uint64_t gated_pairs = 0;        // of those, pairs inside the gate
  friend bool operator==(const Counters&, const Counters&) = default;
};

struct TrackingReport {
  std::map<ObjectClass, MetricSummary> per_class;  // classes with ground truth only
  MetricSummary aggregate;  // mean over present classes; ids summed
  Counters counters;
  std::string measurement_hash;  // hex digest of the sensor stream
  nlohmann::json config_echo = nlohmann::json::object();
};

/// Everything the metrics need from one run, frame by frame.
struct RunLog {
  struct Frame {
    std::vector<world::GroundTruthObject> gt;
    std::vector<perception::Detection> detections;
  };
  std::vector<Frame> frames;
};

/// Splits the log by class and evaluates each present class.
std::map<ObjectClass, MetricSummary> evaluate_classes(const RunLog& log, const MetricParams& params);

/// fps is derived as frames / wall_seconds (0 when no time elapsed).
TrackingReport build_report(const RunLog& log, Counters counters, const MetricParams& params,
                            nlohmann::json config_echo = nlohmann::json::object(), std::string measurement_hash = {});

MetricSummary aggregate_of(const std::map<ObjectClass, MetricSummary>& per_class);

/// Report document: per_class.{class}.{amota,amotp,recall,ids}, aggregate,
/// counters.{frames,wall_seconds,fps,query_refinements,cost_evaluations,gated_pairs},
/// measurement_hash, config_echo.
nlohmann::json report_to_json(const TrackingReport& r);
TrackingReport report_from_json(const nlohmann::json& doc);

/// One row per (class, metric), with the aggregate under class "all".
std::string report_csv(const TrackingReport& r);

/// Digest of the report with wall_seconds and fps removed.
std::uint64_t report_fingerprint(const TrackingReport& r);

}  // namespace pap::metrics
