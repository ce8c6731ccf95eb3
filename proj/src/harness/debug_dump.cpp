#include "pap/harness/debug_dump.hpp"

#include "pap/common/errors.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace pap::harness {

using nlohmann::json;

namespace {

json vec(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

perception::TrackStatus status_from(std::string_view s) {
  using perception::TrackStatus;
  for (TrackStatus t : {TrackStatus::Tentative, TrackStatus::Confirmed, TrackStatus::Coasting, TrackStatus::Terminated}) {
    if (perception::to_string(t) == s) return t;
  }
  throw ConfigError("tracks.status", "unknown status '" + std::string(s) + "'");
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

}  // namespace

json frame_to_json(const FrameTrace& f) {
  json queries = json::array();
  for (const QueryRecord& q : f.queries) {
    queries.push_back({{"provenance", q.provenance == query::Provenance::Predicted ? "predicted" : "random"},
                       {"source_track_id", optional_json(q.source_track_id)},
                       {"horizon_step", q.horizon_step},
                       {"class", q.object_class ? json(to_string(*q.object_class)) : json(nullptr)},
                       {"center", vec(q.center)},
                       {"confidence", q.confidence}});
  }
  json matches = json::array();
  for (const perception::Match& m : f.assignment.matches) matches.push_back({m.row, m.col, m.cost});
  json tracks = json::array();
  for (const TrackRecord& t : f.tracks) {
    tracks.push_back({{"id", t.track_id},
                      {"class", to_string(t.object_class)},
                      {"status", perception::to_string(t.status)},
                      {"center", vec(t.center)},
                      {"velocity", vec(t.velocity)},
                      {"hits", t.hits},
                      {"misses", t.misses},
                      {"coasted", t.coasted}});
  }
  json forecasts = json::array();
  for (const prediction::Forecast& fc : f.forecasts) {
    json points = json::array();
    for (const prediction::HorizonPoint& p : fc.horizon_points) points.push_back({p.step, p.center.x, p.center.y});
    forecasts.push_back({{"track_id", fc.track_id},
                         {"class", to_string(fc.object_class)},
                         {"model", prediction::to_string(fc.model)},
                         {"confidence", fc.confidence},
                         {"points", std::move(points)}});
  }
  json measurements = json::array();
  for (const world::Measurement& m : f.measurements) {
    measurements.push_back({{"center", vec(m.center)},
                            {"class", to_string(m.object_class)},
                            {"score", m.score},
                            {"agent_id", optional_json(m.agent_id)}});
  }
  json detections = json::array();
  for (const perception::Detection& d : f.detections) {
    detections.push_back({{"track_id", d.track_id},
                          {"class", to_string(d.object_class)},
                          {"center", vec(d.center)},
                          {"confidence", d.confidence}});
  }
  json gt = json::array();
  for (const world::GroundTruthObject& g : f.ground_truth) {
    gt.push_back({{"id", g.agent_id}, {"class", to_string(g.object_class)}, {"center", vec(g.center)}});
  }
  return {{"frame", f.frame},
          {"queries", std::move(queries)},
          {"assignment",
           {{"matches", std::move(matches)},
            {"unmatched_queries", f.assignment.unmatched_rows},
            {"unmatched_measurements", f.assignment.unmatched_cols}}},
          {"tracks", std::move(tracks)},
          {"forecasts", std::move(forecasts)},
          {"measurements", std::move(measurements)},
          {"detections", std::move(detections)},
          {"ground_truth", std::move(gt)}};
}

FrameTrace frame_from_json(const json& doc) {
  FrameTrace f;
  f.frame = doc.at("frame").get<std::int64_t>();
  for (const json& q : doc.at("queries")) {
    QueryRecord r;
    r.provenance = q.at("provenance").get<std::string>() == "predicted" ? query::Provenance::Predicted
                                                                        : query::Provenance::Random;
    if (!q.at("source_track_id").is_null()) r.source_track_id = q.at("source_track_id").get<std::uint64_t>();
    r.horizon_step = q.at("horizon_step").get<int>();
    if (!q.at("class").is_null()) r.object_class = class_from_string(q.at("class").get<std::string>());
    r.center = vec_from(q.at("center"));
    r.confidence = q.at("confidence").get<double>();
    f.queries.push_back(r);
  }
  const json& a = doc.at("assignment");
  for (const json& m : a.at("matches")) {
    f.assignment.matches.push_back({m.at(0).get<std::size_t>(), m.at(1).get<std::size_t>(), m.at(2).get<double>()});
  }
  f.assignment.unmatched_rows = a.at("unmatched_queries").get<std::vector<std::size_t>>();
  f.assignment.unmatched_cols = a.at("unmatched_measurements").get<std::vector<std::size_t>>();
  for (const json& t : doc.at("tracks")) {
    f.tracks.push_back({t.at("id").get<std::uint64_t>(), class_from_string(t.at("class").get<std::string>()),
                        status_from(t.at("status").get<std::string>()), vec_from(t.at("center")),
                        vec_from(t.at("velocity")), t.at("hits").get<int>(), t.at("misses").get<int>(),
                        t.at("coasted").get<bool>()});
  }
  for (const json& fc : doc.at("forecasts")) {
    prediction::Forecast out;
    out.track_id = fc.at("track_id").get<std::uint64_t>();
    out.object_class = class_from_string(fc.at("class").get<std::string>());
    out.model = prediction::forecast_model_from_string(fc.at("model").get<std::string>());
    out.confidence = fc.at("confidence").get<double>();
    for (const json& p : fc.at("points")) {
      out.horizon_points.push_back({p.at(0).get<int>(), {p.at(1).get<double>(), p.at(2).get<double>()}});
    }
    f.forecasts.push_back(std::move(out));
  }
  for (const json& m : doc.at("measurements")) {
    world::Measurement out;
    out.frame = f.frame;
    out.center = vec_from(m.at("center"));
    out.object_class = class_from_string(m.at("class").get<std::string>());
    out.score = m.at("score").get<double>();
    if (!m.at("agent_id").is_null()) out.agent_id = m.at("agent_id").get<std::uint64_t>();
    f.measurements.push_back(out);
  }
  for (const json& d : doc.at("detections")) {
    f.detections.push_back({d.at("track_id").get<std::uint64_t>(), class_from_string(d.at("class").get<std::string>()),
                            vec_from(d.at("center")), d.at("confidence").get<double>()});
  }
  for (const json& g : doc.at("ground_truth")) {
    f.ground_truth.push_back(
        {g.at("id").get<std::uint64_t>(), class_from_string(g.at("class").get<std::string>()), vec_from(g.at("center"))});
  }
  return f;
}

void write_dump(const RunTrace& trace, std::ostream& out) {
  const metrics::Counters& k = trace.counters;
  const json header = {{"type", "header"},
                       {"schema_version", 1},
                       {"frame_count", trace.frames.size()},
                       {"gate_threshold", trace.gate_threshold},
                       {"metrics",
                        {{"match_distance", trace.metric_params.match_distance},
                         {"recall_points", trace.metric_params.recall_points}}},
                       {"counters",
                        {{"frames", k.frames},
                         {"wall_seconds", k.wall_seconds},
                         {"query_refinements", k.query_refinements},
                         {"cost_evaluations", k.cost_evaluations},
                         {"gated_pairs", k.gated_pairs}}},
                       {"measurement_hash", trace.measurement_hash},
                       {"config_echo", trace.config_echo}};
  out << header.dump() << '\n';
  for (const FrameTrace& f : trace.frames) out << frame_to_json(f).dump() << '\n';
}

void write_dump(const RunTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_dump(trace, out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

RunTrace read_dump(std::istream& in) {
  RunTrace trace;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("dump", "missing header line");
  try {
    const json header = json::parse(line);
    if (header.value("type", "") != "header") throw ConfigError("dump", "first line is not a header");
    trace.gate_threshold = header.at("gate_threshold").get<double>();
    trace.metric_params.match_distance = header.at("metrics").at("match_distance").get<double>();
    trace.metric_params.recall_points = header.at("metrics").at("recall_points").get<int>();
    const json& k = header.at("counters");
    trace.counters.frames = k.at("frames").get<std::int64_t>();
    trace.counters.wall_seconds = k.at("wall_seconds").get<double>();
    trace.counters.query_refinements = k.at("query_refinements").get<std::uint64_t>();
    trace.counters.cost_evaluations = k.at("cost_evaluations").get<std::uint64_t>();
    trace.counters.gated_pairs = k.at("gated_pairs").get<std::uint64_t>();
    trace.measurement_hash = header.at("measurement_hash").get<std::string>();
    trace.config_echo = header.at("config_echo");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      trace.frames.push_back(frame_from_json(json::parse(line)));
    }
  } catch (const json::exception& e) {
    throw ConfigError("dump", e.what());
  }
  return trace;
}

RunTrace read_dump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dump '" + path.string() + "'");
  return read_dump(in);
}

metrics::TrackingReport replay(const RunTrace& trace) {
  metrics::Counters counters;
  counters.frames = static_cast<std::int64_t>(trace.frames.size());
  counters.wall_seconds = trace.counters.wall_seconds;

  metrics::RunLog log;
  std::uint64_t hash = fnv1a64("");
  for (const FrameTrace& f : trace.frames) {
    counters.query_refinements += f.queries.size();
    for (const QueryRecord& q : f.queries) {
      for (const world::Measurement& m : f.measurements) {
        if (q.provenance == query::Provenance::Predicted && q.object_class != m.object_class) continue;
        ++counters.cost_evaluations;
        const double dx = m.center.x - q.center.x;
        const double dy = m.center.y - q.center.y;
        const double sq = dx * dx;
        if (std::sqrt(sq + dy * dy) <= trace.gate_threshold) ++counters.gated_pairs;
      }
    }
    hash = world::hash_measurements(f.measurements, hash);
    log.frames.push_back({f.ground_truth, f.detections});
  }

  if (counters.frames != trace.counters.frames || counters.query_refinements != trace.counters.query_refinements ||
      counters.cost_evaluations != trace.counters.cost_evaluations ||
      counters.gated_pairs != trace.counters.gated_pairs) {
    throw ContractViolation("replay: recomputed counters disagree with the dump header");
  }
  if (hex(hash) != trace.measurement_hash) {
    throw ContractViolation("replay: measurement stream hash disagrees with the dump header");
  }
  return metrics::build_report(log, counters, trace.metric_params, trace.config_echo, trace.measurement_hash);
}

}  // namespace pap::harness
