#pragma once

#include "pap/harness/runner.hpp"

#include <string>
#include <vector>

namespace pap::harness {

struct SweepRow {
  double rho = 0.0;
  metrics::MetricSummary mean;  // ids averaged, then rounded to nearest
  double mean_ids = 0.0;
  double mean_query_refinements = 0.0;
  double mean_cost_evaluations = 0.0;
  double mean_wall_seconds = 0.0;
  std::vector<metrics::MetricSummary> per_seed;  // in seed order
};

struct SweepTable {
  std::vector<std::uint64_t> seeds;
  std::vector<SweepRow> rows;  // ascending rho
};

SweepTable sweep_table(const ExperimentResult& result);

/// Runs every rho in `rho_values` over cfg.seeds. Throws pap::ConfigError
/// if a value lies outside [0, 1].
SweepTable sweep_rho(const ExperimentConfig& cfg, const std::vector<double>& rho_values, unsigned jobs = 1);

/// rho, mean metrics and mean counters, one row per rho, sorted by rho.
std::string sweep_csv(const SweepTable& t);
/// seed, rho, amota, amotp, recall, ids: one row per (rho, seed).
std::string sweep_seed_csv(const SweepTable& t);

}  // namespace pap::harness
