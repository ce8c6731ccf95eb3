#pragma once

#include "pap/metrics/clear_mot.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pap::metrics {

struct MetricParams {
  double match_distance = 2.0;  // meters
  int recall_points = 40;

  void validate() const;
};

/// Per-frame ground truth and hypotheses of a single class.
struct ClassSequence {
  std::vector<std::vector<GtBox>> gt;
  std::vector<std::vector<Hypothesis>> hyps;  // same length as gt

  std::int64_t gt_count() const noexcept;
};

/// Event totals of one sequence evaluated at one confidence threshold.
struct SweepCounts {
  double threshold = 0.0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t ids = 0;
  double distance_sum = 0.0;
};

/// Runs match_frame over every frame keeping hypotheses with confidence >= threshold.
SweepCounts evaluate_at_threshold(const ClassSequence& seq, double threshold, double match_distance);

/// max(0, min(1, 1 - (ids + fp + fn - (1 - r) P) / (r P))); nullopt when P = 0.
std::optional<double> motar(std::int64_t ids, std::int64_t fp, std::int64_t fn, std::int64_t gt_count, double recall);

struct ClassMetrics {
  double amota = 0.0;
  double amotp = 0.0;
  double recall = 0.0;
  std::int64_t ids = 0;
};

/// Recall-sweep metrics. For each target r = i/n (i = 1..n) the operating
/// point is the highest confidence threshold whose recall reaches r;
/// unreachable targets score MOTAR 0 and are left out of AMOTP. AMOTP with
/// no reachable target is the match distance. Recall is the best achieved
/// recall and ids is counted at the highest threshold achieving it.
/// Returns nullopt when the class has no ground truth.
std::optional<ClassMetrics> amota_amotp(const ClassSequence& seq, const MetricParams& params);

}  // namespace pap::metrics
