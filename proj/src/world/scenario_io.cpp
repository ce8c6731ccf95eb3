#include "pap/world/scenario_io.hpp"

#include "pap/common/errors.hpp"

#include <fstream>

namespace pap::world {

using nlohmann::json;

json scenario_to_json(const Scenario& scenario) {
  json agents = json::array();
  for (const Agent& a : scenario.agents) {
    json states = json::array();
    for (const AgentState& s : a.states) {
      states.push_back({s.position.x, s.position.y, s.velocity.x, s.velocity.y, s.yaw});
    }
    agents.push_back({{"id", a.id},
                      {"class", to_string(a.object_class)},
                      {"motion", to_string(a.motion)},
                      {"yaw_rate", a.yaw_rate},
                      {"extent", {a.extent.length, a.extent.width}},
                      {"spawn", a.spawn},
                      {"despawn", a.despawn},
                      {"states", std::move(states)}});
  }
  json ego = json::array();
  for (const EgoPose& p : scenario.ego) ego.push_back({p.position.x, p.position.y, p.yaw});

  return {{"scenario_id", scenario.scenario_id},
          {"dt", scenario.dt},
          {"frame_count", scenario.frame_count},
          {"seed", scenario.seed},
          {"agents", std::move(agents)},
          {"ego", std::move(ego)}};
}

namespace {

const json& require(const json& doc, const char* key, const std::string& path) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(path + key, "missing");
  return *it;
}

template <typename T>
T get(const json& doc, const char* key, const std::string& path) {
  try {
    return require(doc, key, path).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + key, e.what());
  }
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario", "expected a JSON object");
  Scenario s;
  s.scenario_id = get<std::string>(doc, "scenario_id", "");
  s.dt = get<double>(doc, "dt", "");
  s.frame_count = get<std::int64_t>(doc, "frame_count", "");
  s.seed = get<std::uint64_t>(doc, "seed", "");

  const json& agents = require(doc, "agents", "");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const json& a = agents[i];
    const std::string path = "agents[" + std::to_string(i) + "].";
    Agent agent;
    agent.id = get<std::uint64_t>(a, "id", path);
    agent.object_class = class_from_string(get<std::string>(a, "class", path));
    agent.motion = a.contains("motion") ? motion_from_string(get<std::string>(a, "motion", path))
                                        : MotionModel::ConstantVelocity;
    agent.yaw_rate = a.contains("yaw_rate") ? get<double>(a, "yaw_rate", path) : 0.0;
    if (a.contains("extent")) {
      const auto ext = get<std::vector<double>>(a, "extent", path);
      if (ext.size() != 2) throw ConfigError(path + "extent", "expected [length, width]");
      agent.extent = {ext[0], ext[1]};
    }
    agent.spawn = get<std::int64_t>(a, "spawn", path);
    agent.despawn = get<std::int64_t>(a, "despawn", path);
    for (const auto& row : get<std::vector<std::vector<double>>>(a, "states", path)) {
      if (row.size() != 5) throw ConfigError(path + "states", "expected [x, y, vx, vy, yaw]");
      agent.states.push_back({{row[0], row[1]}, {row[2], row[3]}, row[4]});
    }
    s.agents.push_back(std::move(agent));
  }
  for (const auto& row : get<std::vector<std::vector<double>>>(doc, "ego", "")) {
    if (row.size() != 3) throw ConfigError("ego", "expected [x, y, yaw]");
    s.ego.push_back({{row[0], row[1]}, row[2]});
  }
  check_invariants(s);
  return s;
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << scenario_to_json(scenario).dump() << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(path.string(), e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace pap::world
