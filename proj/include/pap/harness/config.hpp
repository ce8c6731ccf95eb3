#pragma once

#include "pap/metrics/amota.hpp"
#include "pap/perception/query_assembly.hpp"
#include "pap/perception/tracker.hpp"
#include "pap/prediction/forecast.hpp"
#include "pap/world/scenario.hpp"
#include "pap/world/sensor.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pap::harness {

inline constexpr int kSchemaVersion = 1;

enum class Mode : std::uint8_t { Baseline, Pap, AbCompare, RhoSweep };

std::string_view to_string(Mode m) noexcept;
Mode mode_from_string(std::string_view name);

struct PerceptionSettings {
  double gate_threshold = 4.0;
  double alpha = 0.7;
  int confirm_threshold = 2;
  int max_misses = 3;
  std::size_t embedding_dim = 16;
  std::size_t bank_capacity = 4;
};

struct OutputSettings {
  std::filesystem::path dir = "out";
  bool dump_debug = false;
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  Mode mode = Mode::AbCompare;
  std::vector<std::uint64_t> seeds{1};
  world::ScenarioConfig scenario;
  std::optional<std::filesystem::path> scenario_path;  // replaces generation when set
  world::SensorConfig sensor;
  perception::QueryAssemblyPolicy policy;
  PerceptionSettings perception;
  prediction::PredictorConfig predictor;  // dt is taken from the scenario
  metrics::MetricParams metrics;
  std::vector<double> sweep_rho;
  OutputSettings output;

  /// Throws pap::ConfigError naming the first invalid field.
  void validate() const;

  /// Perception/predictor parameters for a run with scenario step `dt`.
  perception::PerceptionParams perception_params(double dt) const;
  prediction::PredictorConfig predictor_config(double dt) const;
};

/// Strict parse: every section is optional, unknown keys are rejected and
/// `schema_version` must match. Throws pap::ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Throws pap::IoError if unreadable, pap::ConfigError if malformed.
/// A relative scenario_path is resolved against the config file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace pap::harness
