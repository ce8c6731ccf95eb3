#pragma once

#include "pap/common/geometry.hpp"
#include "pap/common/object_class.hpp"
#include "pap/common/rng.hpp"
#include "pap/world/scenario.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pap::world {

/// Linear fall-off of detector score with distance from the ego.
struct ScoreModel {
  double base = 0.95;
  double slope_per_meter = 0.005;
  double floor = 0.05;
};

struct SensorConfig {
  double position_noise_sigma = 0.5;  // meters, per axis
  double miss_probability = 0.15;
  double clutter_rate = 2.0;          // Poisson mean of false positives per frame
  double detection_range = 75.0;      // meters from ego
  ScoreModel score;

  void validate() const;
};

/// One noisy observation. Clutter carries no agent id.
struct Measurement {
  std::int64_t frame = 0;
  Vec2 center;
  ObjectClass object_class = ObjectClass::Car;
  double score = 0.0;
  std::optional<std::uint64_t> agent_id;

  bool is_clutter() const noexcept { return !agent_id.has_value(); }
  friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Observes frame `frame`. Agents are visited in scenario order and always
/// consume the same number of draws, so the output is a pure function of
/// the scenario, the config and the stream state.
std::vector<Measurement> sense(const Scenario& scenario, std::int64_t frame, const SensorConfig& sensor, Rng& rng);

/// FNV-1a over the bit patterns of a measurement list; chains through `h`.
std::uint64_t hash_measurements(const std::vector<Measurement>& ms, std::uint64_t h);

}  // namespace pap::world
