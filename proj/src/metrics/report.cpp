#include "pap/metrics/report.hpp"

#include "pap/common/errors.hpp"
#include "pap/common/rng.hpp"

#include <sstream>

namespace pap::metrics {

using nlohmann::json;

std::map<ObjectClass, MetricSummary> evaluate_classes(const RunLog& log, const MetricParams& params) {
  std::map<ObjectClass, MetricSummary> out;
  for (ObjectClass c : kAllClasses) {
    ClassSequence seq;
    seq.gt.resize(log.frames.size());
    seq.hyps.resize(log.frames.size());
    for (std::size_t f = 0; f < log.frames.size(); ++f) {
      for (const auto& g : log.frames[f].gt) {
        if (g.object_class == c) seq.gt[f].push_back({g.agent_id, g.center});
      }
      for (const auto& d : log.frames[f].detections) {
        if (d.object_class == c) seq.hyps[f].push_back({d.track_id, d.center, d.confidence});
      }
    }
    if (auto m = amota_amotp(seq, params)) out[c] = {m->amota, m->amotp, m->recall, m->ids};
  }
  return out;
}

MetricSummary aggregate_of(const std::map<ObjectClass, MetricSummary>& per_class) {
  MetricSummary agg;
  if (per_class.empty()) return agg;
  for (const auto& [_, m] : per_class) {
    agg.amota += m.amota;
    agg.amotp += m.amotp;
    agg.recall += m.recall;
    agg.ids += m.ids;
  }
  const auto n = static_cast<double>(per_class.size());
  agg.amota /= n;
  agg.amotp /= n;
  agg.recall /= n;
  return agg;
}

TrackingReport build_report(const RunLog& log, Counters counters, const MetricParams& params, json config_echo,
                            std::string measurement_hash) {
  TrackingReport r;
  r.per_class = evaluate_classes(log, params);
  r.aggregate = aggregate_of(r.per_class);
  counters.fps = counters.wall_seconds > 0.0 ? static_cast<double>(counters.frames) / counters.wall_seconds : 0.0;
  r.counters = counters;
  r.config_echo = std::move(config_echo);
  r.measurement_hash = std::move(measurement_hash);
  return r;
}

namespace {

json summary_json(const MetricSummary& m) {
  return {{"amota", m.amota}, {"amotp", m.amotp}, {"recall", m.recall}, {"ids", m.ids}};
}

MetricSummary summary_from(const json& j) {
  return {j.at("amota").get<double>(), j.at("amotp").get<double>(), j.at("recall").get<double>(),
          j.at("ids").get<std::int64_t>()};
}

}  // namespace

json report_to_json(const TrackingReport& r) {
  json per_class = json::object();
  for (const auto& [c, m] : r.per_class) per_class[std::string(to_string(c))] = summary_json(m);
  const Counters& k = r.counters;
  return {{"per_class", std::move(per_class)},
          {"aggregate", summary_json(r.aggregate)},
          {"counters",
           {{"frames", k.frames},
            {"wall_seconds", k.wall_seconds},
            {"fps", k.fps},
            {"query_refinements", k.query_refinements},
            {"cost_evaluations", k.cost_evaluations},
            {"gated_pairs", k.gated_pairs}}},
          {"measurement_hash", r.measurement_hash},
          {"config_echo", r.config_echo}};
}

TrackingReport report_from_json(const json& doc) {
  try {
    TrackingReport r;
    for (const auto& [name, m] : doc.at("per_class").items()) r.per_class[class_from_string(name)] = summary_from(m);
    r.aggregate = summary_from(doc.at("aggregate"));
    const json& k = doc.at("counters");
    r.counters.frames = k.at("frames").get<std::int64_t>();
    r.counters.wall_seconds = k.at("wall_seconds").get<double>();
    r.counters.fps = k.at("fps").get<double>();
    r.counters.query_refinements = k.at("query_refinements").get<std::uint64_t>();
    r.counters.cost_evaluations = k.at("cost_evaluations").get<std::uint64_t>();
    r.counters.gated_pairs = k.value("gated_pairs", std::uint64_t{0});
    r.measurement_hash = doc.value("measurement_hash", std::string{});
    r.config_echo = doc.value("config_echo", json::object());
    return r;
  } catch (const json::exception& e) {
    throw ConfigError("report", e.what());
  }
}

std::string report_csv(const TrackingReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "class,metric,value\n";
  auto rows = [&out](std::string_view cls, const MetricSummary& m) {
    out << cls << ",amota," << m.amota << '\n';
    out << cls << ",amotp," << m.amotp << '\n';
    out << cls << ",recall," << m.recall << '\n';
    out << cls << ",ids," << m.ids << '\n';
  };
  for (const auto& [c, m] : r.per_class) rows(to_string(c), m);
  rows("all", r.aggregate);
  return out.str();
}

std::uint64_t report_fingerprint(const TrackingReport& r) {
  json doc = report_to_json(r);
  doc["counters"].erase("wall_seconds");
  doc["counters"].erase("fps");
  return fnv1a64(doc.dump());
}

}  // namespace pap::metrics
