#pragma once

#include "pap/world/scenario.hpp"

#include "json.hpp"

#include <filesystem>

namespace pap::world {

/// Scenario document: scenario_id, dt, frame_count, seed,
/// agents[{id, class, motion, yaw_rate, extent, spawn, despawn,
/// states[[x, y, vx, vy, yaw], ...]}], ego[[x, y, yaw], ...].
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Throws pap::ConfigError on missing or malformed fields and
/// pap::ContractViolation if the loaded scenario breaks an invariant.
Scenario scenario_from_json(const nlohmann::json& doc);

/// Throws pap::IoError when the file cannot be written or read.
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace pap::world
