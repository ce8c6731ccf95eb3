#include "pap/metrics/amota.hpp"

#include "pap/common/errors.hpp"

#include <algorithm>
#include <functional>

namespace pap::metrics {

void MetricParams::validate() const {
  if (!(match_distance > 0.0)) throw ConfigError("metrics.match_distance", "must be positive");
  if (recall_points < 1) throw ConfigError("metrics.recall_points", "must be >= 1");
}

std::int64_t ClassSequence::gt_count() const noexcept {
  std::int64_t n = 0;
  for (const auto& f : gt) n += static_cast<std::int64_t>(f.size());
  return n;
}

SweepCounts evaluate_at_threshold(const ClassSequence& seq, double threshold, double match_distance) {
  SweepCounts c;
  c.threshold = threshold;
  MatchMemory memory;
  std::vector<Hypothesis> kept;
  for (std::size_t f = 0; f < seq.gt.size(); ++f) {
    kept.clear();
    if (f < seq.hyps.size()) {
      for (const Hypothesis& h : seq.hyps[f]) {
        if (h.confidence >= threshold) kept.push_back(h);
      }
    }
    const FrameEvents ev = match_frame(seq.gt[f], kept, match_distance, memory, static_cast<std::int64_t>(f));
    c.tp += ev.tp;
    c.fp += ev.fp;
    c.fn += ev.fn;
    c.ids += ev.ids;
    for (double d : ev.tp_distances) c.distance_sum += d;
  }
  return c;
}

std::optional<double> motar(std::int64_t ids, std::int64_t fp, std::int64_t fn, std::int64_t gt_count, double recall) {
  if (gt_count <= 0) return std::nullopt;
  if (!(recall > 0.0 && recall <= 1.0)) throw ContractViolation("motar: recall must be in (0,1]");
  const double p = static_cast<double>(gt_count);
  const double errors = static_cast<double>(ids + fp + fn) - (1.0 - recall) * p;
  return std::clamp(1.0 - errors / (recall * p), 0.0, 1.0);
}

std::optional<ClassMetrics> amota_amotp(const ClassSequence& seq, const MetricParams& params) {
  params.validate();
  const std::int64_t p = seq.gt_count();
  if (p == 0) return std::nullopt;

  std::vector<double> thresholds;
  for (const auto& frame : seq.hyps) {
    for (const Hypothesis& h : frame) thresholds.push_back(h.confidence);
  }
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  // recall never decreases as the threshold drops (matching is maximum-cardinality)
  std::vector<SweepCounts> sweep;
  sweep.reserve(thresholds.size());
  for (double t : thresholds) sweep.push_back(evaluate_at_threshold(seq, t, params.match_distance));

  ClassMetrics out;
  const int n = params.recall_points;
  double motar_sum = 0.0;
  double amotp_sum = 0.0;
  int achieved = 0;
  for (int i = 1; i <= n; ++i) {
    // tp / P >= i / n, in integers
    auto it = std::find_if(sweep.begin(), sweep.end(), [&](const SweepCounts& c) {
      return c.tp * static_cast<std::int64_t>(n) >= static_cast<std::int64_t>(i) * p;
    });
    if (it == sweep.end()) continue;
    const double r = static_cast<double>(i) / static_cast<double>(n);
    motar_sum += *motar(it->ids, it->fp, it->fn, p, r);
    amotp_sum += it->distance_sum / static_cast<double>(it->tp);
    ++achieved;
  }
  out.amota = motar_sum / static_cast<double>(n);
  out.amotp = achieved > 0 ? amotp_sum / static_cast<double>(achieved) : params.match_distance;

  std::int64_t best_tp = 0;
  for (const SweepCounts& c : sweep) {
    if (c.tp > best_tp) {
      best_tp = c.tp;
      out.ids = c.ids;
    }
  }
  out.recall = static_cast<double>(best_tp) / static_cast<double>(p);
  return out;
}

}  // namespace pap::metrics
