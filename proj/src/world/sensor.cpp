#include "pap/world/sensor.hpp"

#include "pap/common/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace pap::world {

void SensorConfig::validate() const {
  if (!(position_noise_sigma >= 0.0)) throw ConfigError("sensor.position_noise_sigma", "must be >= 0");
  if (!(miss_probability >= 0.0 && miss_probability <= 1.0)) throw ConfigError("sensor.miss_probability", "must be in [0,1]");
  if (!(clutter_rate >= 0.0)) throw ConfigError("sensor.clutter_rate", "must be >= 0");
  if (!(detection_range > 0.0)) throw ConfigError("sensor.detection_range", "must be positive");
  if (!(score.floor >= 0.0 && score.floor <= 1.0)) throw ConfigError("sensor.score.floor", "must be in [0,1]");
  if (!(score.base >= score.floor && score.base <= 1.0)) throw ConfigError("sensor.score.base", "must be in [floor,1]");
  if (!(score.slope_per_meter >= 0.0)) throw ConfigError("sensor.score.slope_per_meter", "must be >= 0");
}

std::vector<Measurement> sense(const Scenario& scenario, std::int64_t frame, const SensorConfig& sensor, Rng& rng) {
  if (frame < 0 || frame >= scenario.frame_count) {
    throw RangeError("sense: frame " + std::to_string(frame) + " outside [0, " + std::to_string(scenario.frame_count) + ")");
  }
  const Vec2 ego = scenario.ego[static_cast<std::size_t>(frame)].position;
  const ScoreModel& sm = sensor.score;
  std::vector<Measurement> out;

  for (const Agent& agent : scenario.agents) {
    if (!agent.alive_at(frame)) continue;
    const Vec2 truth = agent.state_at(frame).position;
    const double range = distance(truth, ego);
    if (range > sensor.detection_range) continue;
    const bool missed = rng.uniform01() < sensor.miss_probability;
    const double nx = rng.normal();
    const double ny = rng.normal();
    if (missed) continue;
    const Vec2 center = truth + Vec2{sensor.position_noise_sigma * nx, sensor.position_noise_sigma * ny};
    const double score = std::clamp(sm.base - sm.slope_per_meter * range, sm.floor, 1.0);
    out.push_back({frame, center, agent.object_class, score, agent.id});
  }

  const auto clutter = rng.poisson(sensor.clutter_rate);
  for (std::uint64_t i = 0; i < clutter; ++i) {
    const double r = sensor.detection_range * std::sqrt(rng.uniform01());
    const double theta = 2.0 * std::numbers::pi * rng.uniform01();
    const auto cls = kAllClasses[static_cast<std::size_t>(rng.uniform_int(0, kAllClasses.size() - 1))];
    const double score = rng.uniform(sm.floor, std::max(sm.floor, 0.5 * sm.base));
    out.push_back({frame, ego + Vec2{r * std::cos(theta), r * std::sin(theta)}, cls, score, std::nullopt});
  }
  return out;
}

std::uint64_t hash_measurements(const std::vector<Measurement>& ms, std::uint64_t h) {
  auto mix = [&h](auto value) {
    const auto bits = std::bit_cast<std::array<char, sizeof(value)>>(value);
    h = fnv1a64(std::string_view(bits.data(), bits.size()), h);
  };
  for (const Measurement& m : ms) {
    mix(m.frame);
    mix(m.center.x);
    mix(m.center.y);
    mix(static_cast<std::uint8_t>(m.object_class));
    mix(m.score);
    mix(m.agent_id.value_or(~std::uint64_t{0}));
  }
  mix(static_cast<std::uint64_t>(ms.size()));
  return h;
}

}  // namespace pap::world
