#pragma once

#include "pap/common/geometry.hpp"
#include "pap/common/object_class.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pap::world {

enum class MotionModel : std::uint8_t { ConstantVelocity, ConstantTurn };

std::string_view to_string(MotionModel m) noexcept;
MotionModel motion_from_string(std::string_view name);

struct Extent {
  double length = 4.5;
  double width = 1.9;
  friend bool operator==(const Extent&, const Extent&) = default;
};

/// Kinematic state of one agent at one frame.
struct AgentState {
  Vec2 position;
  Vec2 velocity;
  double yaw = 0.0;
  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Ground-truth agent: identity plus one state per frame in [spawn, despawn).
struct Agent {
  std::uint64_t id = 0;
  ObjectClass object_class = ObjectClass::Car;
  MotionModel motion = MotionModel::ConstantVelocity;
  double yaw_rate = 0.0;  // rad/s, zero for constant velocity
  Extent extent;
  std::int64_t spawn = 0;
  std::int64_t despawn = 0;
  std::vector<AgentState> states;

  bool alive_at(std::int64_t frame) const noexcept { return frame >= spawn && frame < despawn; }
  const AgentState& state_at(std::int64_t frame) const { return states.at(static_cast<std::size_t>(frame - spawn)); }

  friend bool operator==(const Agent&, const Agent&) = default;
};

struct EgoPose {
  Vec2 position;
  double yaw = 0.0;
  friend bool operator==(const EgoPose&, const EgoPose&) = default;
};

struct Scenario {
  std::string scenario_id;
  double dt = 0.1;
  std::int64_t frame_count = 0;
  std::uint64_t seed = 0;
  std::vector<Agent> agents;
  std::vector<EgoPose> ego;  // one pose per frame

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Per-class sampling ranges for randomly populated scenarios.
struct ClassProfile {
  int min_count = 0;
  int max_count = 0;
  double min_speed = 0.0;  // m/s
  double max_speed = 0.0;  // m/s, also the invariant bound for every agent of the class
  Extent extent;
};

/// An agent placed explicitly instead of sampled.
struct AgentSpec {
  ObjectClass object_class = ObjectClass::Car;
  MotionModel motion = MotionModel::ConstantVelocity;
  Vec2 position;
  Vec2 velocity;
  double yaw_rate = 0.0;
  std::int64_t spawn = 0;
  std::int64_t despawn = -1;  // -1: alive until the last frame
};

struct ScenarioConfig {
  std::int64_t frame_count = 200;
  double dt = 0.1;
  double world_half_extent = 50.0;
  Vec2 ego_start;
  Vec2 ego_velocity;
  std::array<ClassProfile, 7> classes = default_class_profiles();
  double turn_fraction = 0.3;  // share of sampled agents using the constant-turn model
  double min_turn_rate = 0.05;
  double max_turn_rate = 0.4;
  double min_lifespan_fraction = 0.4;  // sampled lifespans lie in [fraction * frames, frames]
  std::vector<AgentSpec> explicit_agents;

  ClassProfile& profile(ObjectClass c) { return classes[static_cast<std::size_t>(c)]; }
  const ClassProfile& profile(ObjectClass c) const { return classes[static_cast<std::size_t>(c)]; }

  /// Throws pap::ConfigError naming the first invalid field.
  void validate() const;

  static std::array<ClassProfile, 7> default_class_profiles();
};

inline constexpr std::int64_t kMaxFrames = 400;
inline constexpr double kMaxSequenceSeconds = 20.0;

/// Deterministic in (cfg, seed). Ground truth is noise-free: every state is
/// evaluated in closed form from the agent's initial state.
Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

/// Exact state of an agent `elapsed` seconds after spawn.
AgentState propagate(const AgentState& initial, MotionModel motion, double yaw_rate, double elapsed);

/// Throws pap::ContractViolation if a structural invariant does not hold.
void check_invariants(const Scenario& scenario);

struct GroundTruthObject {
  std::uint64_t agent_id = 0;
  ObjectClass object_class = ObjectClass::Car;
  Vec2 center;
};

/// Agents alive at `frame` and within `range` meters of the ego.
std::vector<GroundTruthObject> ground_truth(const Scenario& scenario, std::int64_t frame, double range);

}  // namespace pap::world
