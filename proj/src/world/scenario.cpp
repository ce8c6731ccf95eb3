#include "pap/world/scenario.hpp"

#include "pap/common/errors.hpp"
#include "pap/common/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pap::world {

std::string_view to_string(MotionModel m) noexcept {
  return m == MotionModel::ConstantTurn ? "constant_turn" : "constant_velocity";
}

MotionModel motion_from_string(std::string_view name) {
  if (name == "constant_velocity") return MotionModel::ConstantVelocity;
  if (name == "constant_turn") return MotionModel::ConstantTurn;
  throw ConfigError("motion", "unknown motion model '" + std::string(name) + "'");
}

std::array<ClassProfile, 7> ScenarioConfig::default_class_profiles() {
  // order follows kAllClasses
  return {{
      {5, 5, 4.0, 12.0, {4.5, 1.9}},   // car
      {4, 4, 0.5, 1.8, {0.7, 0.7}},    // pedestrian
      {1, 1, 2.0, 6.0, {1.8, 0.6}},    // bicycle
      {1, 1, 4.0, 10.0, {11.0, 2.9}},  // bus
      {1, 1, 4.0, 13.0, {2.1, 0.8}},   // motor
      {1, 1, 3.0, 9.0, {10.0, 2.8}},   // trailer
      {2, 2, 4.0, 10.0, {7.0, 2.6}},   // truck
  }};
}

void ScenarioConfig::validate() const {
  if (frame_count <= 0) throw ConfigError("scenario.frame_count", "must be positive");
  if (frame_count > kMaxFrames) throw ConfigError("scenario.frame_count", "must be <= 400");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("scenario.dt", "must be positive");
  if (static_cast<double>(frame_count) * dt > kMaxSequenceSeconds + 1e-9) {
    throw ConfigError("scenario.dt", "frame_count * dt exceeds 20 s");
  }
  if (!(world_half_extent > 0.0)) throw ConfigError("scenario.world_half_extent", "must be positive");
  if (!is_finite(ego_start) || !is_finite(ego_velocity)) throw ConfigError("scenario.ego", "must be finite");
  for (ObjectClass c : kAllClasses) {
    const ClassProfile& p = profile(c);
    const std::string field = "scenario.classes." + std::string(pap::to_string(c));
    if (p.min_count < 0 || p.max_count < p.min_count) throw ConfigError(field + ".count", "need 0 <= min <= max");
    if (p.min_speed < 0.0 || p.max_speed < p.min_speed) throw ConfigError(field + ".speed", "need 0 <= min <= max");
    if (!(p.extent.length > 0.0) || !(p.extent.width > 0.0)) throw ConfigError(field + ".extent", "must be positive");
  }
  if (turn_fraction < 0.0 || turn_fraction > 1.0) throw ConfigError("scenario.turn_fraction", "must be in [0,1]");
  if (min_turn_rate < 0.0 || max_turn_rate < min_turn_rate) throw ConfigError("scenario.turn_rate", "need 0 <= min <= max");
  if (!(min_lifespan_fraction > 0.0) || min_lifespan_fraction > 1.0) {
    throw ConfigError("scenario.min_lifespan_fraction", "must be in (0,1]");
  }
  for (std::size_t i = 0; i < explicit_agents.size(); ++i) {
    const AgentSpec& a = explicit_agents[i];
    const std::string field = "scenario.agents[" + std::to_string(i) + "]";
    const std::int64_t despawn = a.despawn < 0 ? frame_count : a.despawn;
    if (a.spawn < 0 || despawn <= a.spawn || despawn > frame_count) {
      throw ConfigError(field + ".spawn", "need 0 <= spawn < despawn <= frame_count");
    }
    if (!is_finite(a.position) || !is_finite(a.velocity) || !std::isfinite(a.yaw_rate)) {
      throw ConfigError(field, "kinematics must be finite");
    }
    if (norm(a.velocity) > profile(a.object_class).max_speed + 1e-12) {
      throw ConfigError(field + ".velocity", "speed exceeds the class maximum");
    }
  }
}

AgentState propagate(const AgentState& initial, MotionModel motion, double yaw_rate, double elapsed) {
  if (motion == MotionModel::ConstantVelocity || yaw_rate == 0.0) {
    return {initial.position + elapsed * initial.velocity, initial.velocity, initial.yaw};
  }
  const double speed = norm(initial.velocity);
  const double heading0 = std::atan2(initial.velocity.y, initial.velocity.x);
  const double heading = heading0 + yaw_rate * elapsed;
  const double radius = speed / yaw_rate;
  const Vec2 offset{radius * (std::sin(heading) - std::sin(heading0)),
                    radius * (std::cos(heading0) - std::cos(heading))};
  return {initial.position + offset, {speed * std::cos(heading), speed * std::sin(heading)},
          initial.yaw + yaw_rate * elapsed};
}

namespace {

void fill_states(Agent& agent, const AgentState& initial, double dt) {
  const auto n = static_cast<std::size_t>(agent.despawn - agent.spawn);
  agent.states.clear();
  agent.states.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    agent.states.push_back(propagate(initial, agent.motion, agent.yaw_rate, static_cast<double>(k) * dt));
  }
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();

  Scenario scenario;
  scenario.scenario_id = "scenario-" + std::to_string(seed);
  scenario.dt = cfg.dt;
  scenario.frame_count = cfg.frame_count;
  scenario.seed = seed;

  std::uint64_t next_id = 1;
  for (const AgentSpec& spec : cfg.explicit_agents) {
    Agent agent;
    agent.id = next_id++;
    agent.object_class = spec.object_class;
    agent.motion = spec.motion;
    agent.yaw_rate = spec.motion == MotionModel::ConstantTurn ? spec.yaw_rate : 0.0;
    agent.extent = cfg.profile(spec.object_class).extent;
    agent.spawn = spec.spawn;
    agent.despawn = spec.despawn < 0 ? cfg.frame_count : spec.despawn;
    const double yaw = std::atan2(spec.velocity.y, spec.velocity.x);
    fill_states(agent, {spec.position, spec.velocity, yaw}, cfg.dt);
    scenario.agents.push_back(std::move(agent));
  }

  Rng rng = Rng::stream(seed, "scenario");
  const double w = cfg.world_half_extent;
  const auto min_life = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(cfg.min_lifespan_fraction * static_cast<double>(cfg.frame_count))));
  for (ObjectClass c : kAllClasses) {
    const ClassProfile& profile = cfg.profile(c);
    const auto count = rng.uniform_int(profile.min_count, profile.max_count);
    for (std::int64_t i = 0; i < count; ++i) {
      Agent agent;
      agent.id = next_id++;
      agent.object_class = c;
      agent.extent = profile.extent;

      const auto lifespan = rng.uniform_int(std::min(min_life, cfg.frame_count), cfg.frame_count);
      agent.spawn = rng.uniform_int(0, cfg.frame_count - lifespan);
      agent.despawn = agent.spawn + lifespan;

      // start inside the world, heading roughly across it
      const Vec2 start{rng.uniform(-0.8 * w, 0.8 * w), rng.uniform(-0.8 * w, 0.8 * w)};
      const double heading = std::atan2(-start.y, -start.x) + rng.uniform(-std::numbers::pi / 3, std::numbers::pi / 3);
      const double speed = rng.uniform(profile.min_speed, profile.max_speed);
      const bool turning = rng.bernoulli(cfg.turn_fraction);
      const double turn = rng.uniform(cfg.min_turn_rate, cfg.max_turn_rate);
      const bool left = rng.bernoulli(0.5);

      agent.motion = turning ? MotionModel::ConstantTurn : MotionModel::ConstantVelocity;
      agent.yaw_rate = turning ? (left ? turn : -turn) : 0.0;
      const Vec2 velocity{speed * std::cos(heading), speed * std::sin(heading)};
      fill_states(agent, {start, velocity, heading}, cfg.dt);
      scenario.agents.push_back(std::move(agent));
    }
  }

  scenario.ego.reserve(static_cast<std::size_t>(cfg.frame_count));
  const double ego_yaw = (cfg.ego_velocity == Vec2{}) ? 0.0 : std::atan2(cfg.ego_velocity.y, cfg.ego_velocity.x);
  for (std::int64_t k = 0; k < cfg.frame_count; ++k) {
    scenario.ego.push_back({cfg.ego_start + (static_cast<double>(k) * cfg.dt) * cfg.ego_velocity, ego_yaw});
  }
  return scenario;
}

void check_invariants(const Scenario& scenario) {
  if (scenario.frame_count < 0 || scenario.frame_count > kMaxFrames) {
    throw ContractViolation("scenario frame_count out of range");
  }
  if (static_cast<double>(scenario.frame_count) * scenario.dt > kMaxSequenceSeconds + 1e-9) {
    throw ContractViolation("scenario longer than 20 s");
  }
  if (scenario.ego.size() != static_cast<std::size_t>(scenario.frame_count)) {
    throw ContractViolation("ego trajectory must have one pose per frame");
  }
  for (const Agent& a : scenario.agents) {
    if (a.spawn < 0 || a.spawn >= a.despawn || a.despawn > scenario.frame_count) {
      throw ContractViolation("agent " + std::to_string(a.id) + ": bad lifespan");
    }
    if (a.states.size() != static_cast<std::size_t>(a.despawn - a.spawn)) {
      throw ContractViolation("agent " + std::to_string(a.id) + ": one state per live frame required");
    }
    if (!(a.extent.length > 0.0) || !(a.extent.width > 0.0)) {
      throw ContractViolation("agent " + std::to_string(a.id) + ": extent must be positive");
    }
  }
}

std::vector<GroundTruthObject> ground_truth(const Scenario& scenario, std::int64_t frame, double range) {
  if (frame < 0 || frame >= scenario.frame_count) throw RangeError("ground_truth: frame out of range");
  const Vec2 ego = scenario.ego[static_cast<std::size_t>(frame)].position;
  std::vector<GroundTruthObject> out;
  for (const Agent& a : scenario.agents) {
    if (!a.alive_at(frame)) continue;
    const Vec2 p = a.state_at(frame).position;
    if (distance(p, ego) <= range) out.push_back({a.id, a.object_class, p});
  }
  return out;
}

}  // namespace pap::world
