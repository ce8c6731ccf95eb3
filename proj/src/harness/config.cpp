#include "pap/harness/config.hpp"

#include "pap/common/errors.hpp"

#include <fstream>
#include <set>

namespace pap::harness {

using nlohmann::json;

std::string_view to_string(Mode m) noexcept {
  switch (m) {
    case Mode::Baseline: return "baseline";
    case Mode::Pap: return "pap";
    case Mode::AbCompare: return "ab_compare";
    case Mode::RhoSweep: return "rho_sweep";
  }
  return "unknown";
}

Mode mode_from_string(std::string_view name) {
  for (Mode m : {Mode::Baseline, Mode::Pap, Mode::AbCompare, Mode::RhoSweep}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("mode", "unknown mode '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (schema_version != kSchemaVersion) throw ConfigError("schema_version", "unsupported version");
  if (seeds.empty()) throw ConfigError("seeds", "must not be empty");
  if (!scenario_path) scenario.validate();
  sensor.validate();
  policy.validate();
  perception_params(scenario.dt).validate();
  if (perception.embedding_dim < query::kCenterSlots) throw ConfigError("perception.embedding_dim", "must be >= 2");
  if (perception.bank_capacity < 1) throw ConfigError("perception.bank_capacity", "must be >= 1");
  predictor_config(scenario.dt).validate();
  metrics.validate();
  if (mode == Mode::RhoSweep && sweep_rho.empty()) throw ConfigError("sweep_rho", "required in rho_sweep mode");
  for (double r : sweep_rho) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("sweep_rho", "values must lie in [0,1]");
  }
}

perception::PerceptionParams ExperimentConfig::perception_params(double dt) const {
  return {perception.gate_threshold, perception.alpha, perception.confirm_threshold, perception.max_misses, dt,
          scenario.world_half_extent};
}

prediction::PredictorConfig ExperimentConfig::predictor_config(double dt) const {
  prediction::PredictorConfig p = predictor;
  p.dt = dt;
  return p;
}

namespace {

/// Reads an object section, remembering which keys were consumed so the
/// leftovers can be reported.
class Section {
 public:
  Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError(path_.empty() ? "config" : path_, "expected an object");
  }

  std::string field(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

  bool has(const char* key) {
    seen_.insert(key);
    return doc_.contains(key);
  }

  template <typename T>
  void read(const char* key, T& out) {
    if (!has(key)) return;
    try {
      out = doc_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(field(key), e.what());
    }
  }

  void read_vec2(const char* key, Vec2& out) {
    std::vector<double> v;
    read(key, v);
    if (!has(key)) return;
    if (v.size() != 2) throw ConfigError(field(key), "expected [x, y]");
    out = {v[0], v[1]};
  }

  void read_range(const char* key, double& lo, double& hi) {
    if (!has(key)) return;
    std::vector<double> v;
    read(key, v);
    if (v.size() != 2) throw ConfigError(field(key), "expected [min, max]");
    lo = v[0];
    hi = v[1];
  }

  Section child(const char* key) {
    seen_.insert(key);
    return Section(doc_.at(key), field(key));
  }

  const json& raw(const char* key) {
    seen_.insert(key);
    return doc_.at(key);
  }

  void finish() const {
    for (const auto& [key, _] : doc_.items()) {
      if (!seen_.contains(key)) throw ConfigError(field(key), "unknown key");
    }
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

void parse_scenario(Section s, world::ScenarioConfig& cfg) {
  s.read("frame_count", cfg.frame_count);
  s.read("dt", cfg.dt);
  s.read("world_half_extent", cfg.world_half_extent);
  if (s.has("ego")) {
    Section ego = s.child("ego");
    ego.read_vec2("start", cfg.ego_start);
    ego.read_vec2("velocity", cfg.ego_velocity);
    ego.finish();
  }
  if (s.has("classes")) {
    Section classes = s.child("classes");
    for (ObjectClass c : kAllClasses) {
      const std::string name(to_string(c));
      if (!classes.has(name.c_str())) continue;
      Section p = classes.child(name.c_str());
      world::ClassProfile& prof = cfg.profile(c);
      if (p.has("count")) {
        std::vector<int> v;
        p.read("count", v);
        if (v.size() != 2) throw ConfigError(p.field("count"), "expected [min, max]");
        prof.min_count = v[0];
        prof.max_count = v[1];
      }
      p.read_range("speed", prof.min_speed, prof.max_speed);
      p.read_range("extent", prof.extent.length, prof.extent.width);
      p.finish();
    }
    classes.finish();
  }
  s.read("turn_fraction", cfg.turn_fraction);
  s.read_range("turn_rate", cfg.min_turn_rate, cfg.max_turn_rate);
  s.read("min_lifespan_fraction", cfg.min_lifespan_fraction);
  if (s.has("agents")) {
    const json& agents = s.raw("agents");
    if (!agents.is_array()) throw ConfigError(s.field("agents"), "expected an array");
    cfg.explicit_agents.clear();
    for (std::size_t i = 0; i < agents.size(); ++i) {
      Section a(agents[i], s.field("agents[" + std::to_string(i) + "]"));
      world::AgentSpec spec;
      std::string cls = "car", motion = "constant_velocity";
      a.read("class", cls);
      a.read("motion", motion);
      spec.object_class = class_from_string(cls);
      spec.motion = world::motion_from_string(motion);
      a.read_vec2("position", spec.position);
      a.read_vec2("velocity", spec.velocity);
      a.read("yaw_rate", spec.yaw_rate);
      a.read("spawn", spec.spawn);
      a.read("despawn", spec.despawn);
      a.finish();
      cfg.explicit_agents.push_back(spec);
    }
  }
  s.finish();
}

json scenario_json(const world::ScenarioConfig& cfg) {
  json classes = json::object();
  for (ObjectClass c : kAllClasses) {
    const world::ClassProfile& p = cfg.profile(c);
    classes[std::string(to_string(c))] = {{"count", {p.min_count, p.max_count}},
                                          {"speed", {p.min_speed, p.max_speed}},
                                          {"extent", {p.extent.length, p.extent.width}}};
  }
  json agents = json::array();
  for (const world::AgentSpec& a : cfg.explicit_agents) {
    agents.push_back({{"class", to_string(a.object_class)},
                      {"motion", world::to_string(a.motion)},
                      {"position", {a.position.x, a.position.y}},
                      {"velocity", {a.velocity.x, a.velocity.y}},
                      {"yaw_rate", a.yaw_rate},
                      {"spawn", a.spawn},
                      {"despawn", a.despawn}});
  }
  return {{"frame_count", cfg.frame_count},
          {"dt", cfg.dt},
          {"world_half_extent", cfg.world_half_extent},
          {"ego", {{"start", {cfg.ego_start.x, cfg.ego_start.y}}, {"velocity", {cfg.ego_velocity.x, cfg.ego_velocity.y}}}},
          {"classes", std::move(classes)},
          {"turn_fraction", cfg.turn_fraction},
          {"turn_rate", {cfg.min_turn_rate, cfg.max_turn_rate}},
          {"min_lifespan_fraction", cfg.min_lifespan_fraction},
          {"agents", std::move(agents)}};
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  Section root(doc, "");
  if (!root.has("schema_version")) throw ConfigError("schema_version", "missing");
  root.read("schema_version", cfg.schema_version);
  if (cfg.schema_version != kSchemaVersion) {
    throw ConfigError("schema_version", "expected " + std::to_string(kSchemaVersion));
  }
  if (root.has("mode")) {
    std::string mode;
    root.read("mode", mode);
    cfg.mode = mode_from_string(mode);
  }
  root.read("seeds", cfg.seeds);
  if (root.has("scenario")) parse_scenario(root.child("scenario"), cfg.scenario);
  if (root.has("scenario_path")) {
    std::string p;
    root.read("scenario_path", p);
    cfg.scenario_path = p;
  }
  if (root.has("sensor")) {
    Section s = root.child("sensor");
    s.read("position_noise_sigma", cfg.sensor.position_noise_sigma);
    s.read("miss_probability", cfg.sensor.miss_probability);
    s.read("clutter_rate", cfg.sensor.clutter_rate);
    s.read("detection_range", cfg.sensor.detection_range);
    if (s.has("score")) {
      Section sc = s.child("score");
      sc.read("base", cfg.sensor.score.base);
      sc.read("slope_per_meter", cfg.sensor.score.slope_per_meter);
      sc.read("floor", cfg.sensor.score.floor);
      sc.finish();
    }
    s.finish();
  }
  if (root.has("policy")) {
    Section s = root.child("policy");
    s.read("total_queries", cfg.policy.total_queries);
    s.read("replace_fraction", cfg.policy.replace_fraction);
    if (s.has("budget")) {
      std::string b;
      s.read("budget", b);
      cfg.policy.budget = perception::budget_from_string(b);
    }
    s.finish();
  }
  if (root.has("perception")) {
    Section s = root.child("perception");
    s.read("gate_threshold", cfg.perception.gate_threshold);
    s.read("alpha", cfg.perception.alpha);
    s.read("confirm_threshold", cfg.perception.confirm_threshold);
    s.read("max_misses", cfg.perception.max_misses);
    s.read("embedding_dim", cfg.perception.embedding_dim);
    s.read("bank_capacity", cfg.perception.bank_capacity);
    s.finish();
  }
  if (root.has("predictor")) {
    Section s = root.child("predictor");
    s.read("horizon", cfg.predictor.horizon);
    s.read("feed_step", cfg.predictor.feed_step);
    s.read("feed_all", cfg.predictor.feed_all);
    if (s.has("model")) {
      std::string m;
      s.read("model", m);
      cfg.predictor.model = prediction::forecast_model_from_string(m);
    }
    s.finish();
  }
  if (root.has("metrics")) {
    Section s = root.child("metrics");
    s.read("match_distance", cfg.metrics.match_distance);
    s.read("recall_points", cfg.metrics.recall_points);
    s.finish();
  }
  root.read("sweep_rho", cfg.sweep_rho);
  if (root.has("output")) {
    Section s = root.child("output");
    std::string dir = cfg.output.dir.string();
    s.read("dir", dir);
    cfg.output.dir = dir;
    s.read("dump_debug", cfg.output.dump_debug);
    s.finish();
  }
  root.finish();
  if (cfg.mode == Mode::Baseline) cfg.policy.replace_fraction = 0.0;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(path.string(), e.what());
  }
  ExperimentConfig cfg = parse_config(doc);
  if (cfg.scenario_path && cfg.scenario_path->is_relative()) {
    cfg.scenario_path = path.parent_path() / *cfg.scenario_path;
  }
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json doc = {
      {"schema_version", cfg.schema_version},
      {"mode", to_string(cfg.mode)},
      {"seeds", cfg.seeds},
      {"scenario", scenario_json(cfg.scenario)},
      {"sensor",
       {{"position_noise_sigma", cfg.sensor.position_noise_sigma},
        {"miss_probability", cfg.sensor.miss_probability},
        {"clutter_rate", cfg.sensor.clutter_rate},
        {"detection_range", cfg.sensor.detection_range},
        {"score",
         {{"base", cfg.sensor.score.base},
          {"slope_per_meter", cfg.sensor.score.slope_per_meter},
          {"floor", cfg.sensor.score.floor}}}}},
      {"policy",
       {{"total_queries", cfg.policy.total_queries},
        {"replace_fraction", cfg.policy.replace_fraction},
        {"budget", perception::to_string(cfg.policy.budget)}}},
      {"perception",
       {{"gate_threshold", cfg.perception.gate_threshold},
        {"alpha", cfg.perception.alpha},
        {"confirm_threshold", cfg.perception.confirm_threshold},
        {"max_misses", cfg.perception.max_misses},
        {"embedding_dim", cfg.perception.embedding_dim},
        {"bank_capacity", cfg.perception.bank_capacity}}},
      {"predictor",
       {{"horizon", cfg.predictor.horizon},
        {"feed_step", cfg.predictor.feed_step},
        {"feed_all", cfg.predictor.feed_all},
        {"model", prediction::to_string(cfg.predictor.model)}}},
      {"metrics", {{"match_distance", cfg.metrics.match_distance}, {"recall_points", cfg.metrics.recall_points}}},
      {"sweep_rho", cfg.sweep_rho},
      {"output", {{"dir", cfg.output.dir.string()}, {"dump_debug", cfg.output.dump_debug}}}};
  if (cfg.scenario_path) doc["scenario_path"] = cfg.scenario_path->string();
  return doc;
}

}  // namespace pap::harness
