#pragma once

#include "pap/metrics/report.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pap::harness {

using SeedReports = std::vector<std::pair<std::uint64_t, metrics::TrackingReport>>;

/// Zips seeds with reports; throws pap::ContractViolation on a size mismatch.
SeedReports paired(const std::vector<std::uint64_t>& seeds, const std::vector<metrics::TrackingReport>& reports);

/// (pap - baseline) / |baseline|, absent when baseline is 0.
std::optional<double> relative_delta(double baseline, double pap);

struct MetricComparison {
  std::string metric;
  double baseline_mean = 0.0;
  double baseline_std = 0.0;  // sample std, 0 for a single seed
  double pap_mean = 0.0;
  double pap_std = 0.0;
  double absolute_delta = 0.0;
  std::optional<double> relative_delta;
};

MetricComparison compare_values(std::string metric, const std::vector<double>& baseline, const std::vector<double>& pap);

/// Paired one-sided sign test: ties are dropped and p = P(X >= wins) for
/// X ~ Binomial(wins + losses, 1/2).
struct SignTest {
  int wins = 0;
  int losses = 0;
  int ties = 0;
  double p_value = 1.0;
};

SignTest sign_test(const std::vector<double>& baseline, const std::vector<double>& pap, bool higher_is_better = true);

struct SeedPair {
  std::uint64_t seed = 0;
  metrics::MetricSummary baseline;
  metrics::MetricSummary pap;
  metrics::Counters baseline_counters;
  metrics::Counters pap_counters;
  bool same_measurements = false;  // measurement hashes agree
};

struct ComparisonSummary {
  std::vector<MetricComparison> metrics;   // amota, amotp, recall, ids
  std::vector<MetricComparison> counters;  // wall_seconds, fps, query_refinements, cost_evaluations, gated_pairs
  std::vector<SeedPair> seeds;
  SignTest amota_sign_test;

  const MetricComparison& metric(std::string_view name) const;
  const MetricComparison& counter(std::string_view name) const;
};

/// Per-seed paired comparison of aggregate metrics and counters.
/// Throws pap::ContractViolation unless both arms cover the same seeds.
ComparisonSummary compare(const SeedReports& baseline, const SeedReports& pap);

nlohmann::json comparison_to_json(const ComparisonSummary& s);

/// One row per metric/counter: name, means, stds, deltas.
std::string comparison_csv(const ComparisonSummary& s);

}  // namespace pap::harness
