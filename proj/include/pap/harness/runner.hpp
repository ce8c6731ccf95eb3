#pragma once

#include "pap/harness/config.hpp"
#include "pap/harness/debug_dump.hpp"
#include "pap/metrics/report.hpp"
#include "pap/world/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pap::harness {

/// One side of an A/B comparison: a name and the replacement fraction it runs at.
struct Arm {
  std::string name;
  double rho = 0.0;
};

struct RunResult {
  std::uint64_t seed = 0;
  Arm arm;
  metrics::TrackingReport report;
  std::optional<RunTrace> trace;  // filled when a trace was requested
  std::vector<std::uint64_t> frame_cost_evaluations;  // per frame, for compute checks
};

/// The scenario a seed runs on: loaded from cfg.scenario_path when set,
/// otherwise generated from the seed.
world::Scenario scenario_for(const ExperimentConfig& cfg, std::uint64_t seed);

/// Runs sense -> perceive -> predict_and_store over every frame. Sensor and
/// query randomness come from per-frame streams of `seed`, so arms sharing a
/// seed see identical measurements. Only perception and prediction are timed.
RunResult run_single(const ExperimentConfig& cfg, const world::Scenario& scenario, std::uint64_t seed,
                     const Arm& arm, bool record_trace = false);
RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed, const Arm& arm, bool record_trace = false);

/// Arms implied by the mode: baseline (rho 0), pap (policy rho), both, or
/// one per sweep value.
std::vector<Arm> arms_for(const ExperimentConfig& cfg);

std::string sweep_arm_name(double rho);

struct ExperimentResult {
  std::vector<Arm> arms;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<metrics::TrackingReport>> reports;  // [arm][seed]
};

/// Every (arm, seed) run on up to `jobs` worker threads. Results are placed
/// by index, so the output does not depend on scheduling.
ExperimentResult run_arms(const ExperimentConfig& cfg, const std::vector<Arm>& arms, unsigned jobs = 1);

/// run_arms over arms_for(cfg), then writes <out>/<arm>/report_seed<N>.{json,csv}
/// (and dump_seed<N>.jsonl with output.dump_debug) and, for ab_compare,
/// <out>/comparison.{json,csv}; for rho_sweep, <out>/sweep.csv.
/// Throws pap::IoError when the output cannot be written.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs = 1);

void write_report(const metrics::TrackingReport& report, const std::filesystem::path& dir, std::uint64_t seed);

/// Reads every report_seed<N>.json in `dir`, ordered by seed.
std::vector<std::pair<std::uint64_t, metrics::TrackingReport>> read_report_dir(const std::filesystem::path& dir);

}  // namespace pap::harness
