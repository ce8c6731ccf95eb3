#include "pap/perception/tracker.hpp"

#include "pap/common/errors.hpp"
#include "pap/perception/gating.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace pap::perception {

std::string_view to_string(TrackStatus s) noexcept {
  switch (s) {
    case TrackStatus::Tentative: return "tentative";
    case TrackStatus::Confirmed: return "confirmed";
    case TrackStatus::Coasting: return "coasting";
    case TrackStatus::Terminated: return "terminated";
  }
  return "unknown";
}

double Track::confidence() const noexcept {
  const double c = static_cast<double>(hits) / static_cast<double>(hits + misses + 1);
  return std::clamp(c, 0.0, 1.0);
}

const Track* TrackSet::find(std::uint64_t id) const noexcept {
  auto it = std::lower_bound(tracks.begin(), tracks.end(), id,
                             [](const Track& t, std::uint64_t v) { return t.track_id < v; });
  return it != tracks.end() && it->track_id == id ? &*it : nullptr;
}

Track* TrackSet::find(std::uint64_t id) noexcept {
  return const_cast<Track*>(static_cast<const TrackSet&>(*this).find(id));
}

void PerceptionParams::validate() const {
  if (!(gate_threshold > 0.0)) throw ConfigError("perception.gate_threshold", "must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("perception.alpha", "must be in [0,1]");
  if (confirm_threshold < 1) throw ConfigError("perception.confirm_threshold", "must be >= 1");
  if (max_misses < 0) throw ConfigError("perception.max_misses", "must be >= 0");
  if (!(dt > 0.0)) throw ConfigError("perception.dt", "must be positive");
  if (!(world_half_extent > 0.0)) throw ConfigError("perception.world_half_extent", "must be positive");
}

namespace {

Vec2 dead_reckon(const Track& t, std::int64_t frame, double dt) {
  const TrackState& s = t.current();
  return s.center + (dt * static_cast<double>(frame - s.frame)) * s.velocity;
}

void refresh(Track& t, Vec2 prior, Vec2 measured, std::int64_t frame, const PerceptionParams& p) {
  const TrackState& last = t.current();
  const Vec2 center = t.state_history.size() < 2 ? measured : (1.0 - p.alpha) * prior + p.alpha * measured;
  const Vec2 velocity = (center - last.center) / (p.dt * static_cast<double>(frame - last.frame));
  t.state_history.push_back({frame, center, velocity, false});
  ++t.hits;
  t.misses = 0;
  if (t.status == TrackStatus::Coasting) {
    t.status = TrackStatus::Confirmed;
  } else if (t.status == TrackStatus::Tentative && t.hits >= p.confirm_threshold) {
    t.status = TrackStatus::Confirmed;
  }
}

void miss(Track& t, std::int64_t frame, const PerceptionParams& p) {
  ++t.misses;
  t.hits = 0;
  if (t.status == TrackStatus::Tentative || t.misses > p.max_misses) {
    t.status = TrackStatus::Terminated;
    return;
  }
  t.status = TrackStatus::Coasting;
  const TrackState& last = t.current();
  t.state_history.push_back({frame, dead_reckon(t, frame, p.dt), last.velocity, true});
}

void check_assignment(const Assignment& a, std::size_t n_queries, std::size_t n_meas) {
  std::vector<char> q_seen(n_queries, 0), m_seen(n_meas, 0);
  auto mark = [](std::vector<char>& seen, std::size_t i, const char* what) {
    if (i >= seen.size()) throw ContractViolation(std::string("assignment ") + what + " index out of range");
    if (seen[i]) throw ContractViolation(std::string("assignment reuses ") + what + " index");
    seen[i] = 1;
  };
  for (const Match& m : a.matches) {
    mark(q_seen, m.row, "query");
    mark(m_seen, m.col, "measurement");
  }
  for (std::size_t r : a.unmatched_rows) mark(q_seen, r, "query");
  for (std::size_t c : a.unmatched_cols) mark(m_seen, c, "measurement");
}

struct Unclaimed {
  std::size_t measurement;
  std::span<const double> tail;
};

}  // namespace

TrackUpdate update_tracks(TrackSet tracks, const Assignment& assignment, std::span<const query::Query> queries,
                          std::span<const world::Measurement> measurements, std::int64_t frame,
                          const PerceptionParams& params, const query::AffineCodec& codec) {
  check_assignment(assignment, queries.size(), measurements.size());

  std::vector<char> refreshed(tracks.tracks.size(), 0);
  auto index_of = [&](const Track* t) { return static_cast<std::size_t>(t - tracks.tracks.data()); };

  std::vector<Unclaimed> unclaimed;
  for (const Match& m : assignment.matches) {
    const query::Query& q = queries[m.row];
    const world::Measurement& meas = measurements[m.col];
    if (!q.is_predicted()) {
      unclaimed.push_back({m.col, q.tail()});
      continue;
    }
    Track* t = tracks.find(*q.source_track_id);
    if (t == nullptr || !t->live()) {
      throw ContractViolation("predicted query references unknown track " + std::to_string(*q.source_track_id));
    }
    if (refreshed[index_of(t)]) {
      // a second horizon step of the same track; the measurement is up for grabs
      unclaimed.push_back({m.col, q.tail()});
      continue;
    }
    refresh(*t, codec.decode_reference(q).center, meas.center, frame, params);
    refreshed[index_of(t)] = 1;
  }

  // link measurements won by random queries to tracks nobody refreshed
  std::vector<std::size_t> stale;
  for (std::size_t i = 0; i < tracks.tracks.size(); ++i) {
    if (!refreshed[i]) stale.push_back(i);
  }
  CostMatrix link_costs(unclaimed.size(), stale.size());
  for (std::size_t u = 0; u < unclaimed.size(); ++u) {
    const world::Measurement& meas = measurements[unclaimed[u].measurement];
    for (std::size_t s = 0; s < stale.size(); ++s) {
      const Track& t = tracks.tracks[stale[s]];
      if (t.object_class != meas.object_class) continue;
      const double d = distance(dead_reckon(t, frame, params.dt), meas.center);
      if (d <= params.gate_threshold) link_costs.at(u, s) = d;
    }
  }
  TrackUpdate out;
  out.links = associate(link_costs);
  for (const Match& link : out.links.matches) {
    Track& t = tracks.tracks[stale[link.col]];
    refresh(t, dead_reckon(t, frame, params.dt), measurements[unclaimed[link.row].measurement].center, frame, params);
    refreshed[stale[link.col]] = 1;
  }

  for (std::size_t i = 0; i < tracks.tracks.size(); ++i) {
    if (!refreshed[i]) miss(tracks.tracks[i], frame, params);
  }

  // births, ids ascending so the set stays sorted
  for (std::size_t u : out.links.unmatched_rows) {
    const world::Measurement& meas = measurements[unclaimed[u].measurement];
    Track t;
    t.track_id = tracks.next_track_id++;
    t.object_class = meas.object_class;
    t.state_history.push_back({frame, meas.center, Vec2{}, false});
    t.hits = 1;
    t.status = t.hits >= params.confirm_threshold ? TrackStatus::Confirmed : TrackStatus::Tentative;
    t.last_query = codec.embed_center({meas.center}, unclaimed[u].tail);
    tracks.tracks.push_back(std::move(t));
  }

  std::vector<Track> live;
  live.reserve(tracks.tracks.size());
  for (Track& t : tracks.tracks) {
    if (t.live()) {
      live.push_back(std::move(t));
    } else {
      out.terminated.push_back(t.track_id);
    }
  }
  tracks.tracks = std::move(live);

  for (Track& t : tracks.tracks) {
    const TrackState& s = t.current();
    query::Query refined = codec.embed_center({s.center}, t.last_query.tail());
    refined.provenance = query::Provenance::Predicted;
    refined.source_track_id = t.track_id;
    refined.track_id = t.track_id;
    refined.object_class = t.object_class;
    refined.horizon_step = 0;
    refined.confidence = t.confidence();
    refined.created_frame = frame;
    t.last_query = refined;
    out.refined_queries.push_back(std::move(refined));
    if (t.status == TrackStatus::Confirmed && !s.coasted && s.frame == frame) {
      out.detections.push_back({t.track_id, t.object_class, s.center, t.confidence()});
    }
  }
  out.tracks = std::move(tracks);
  return out;
}

PerceptionOutput perceive(std::int64_t frame, std::span<const world::Measurement> measurements,
                          const query::QueryBank& bank, TrackSet tracks, const QueryAssemblyPolicy& policy,
                          const PerceptionParams& params, const query::AffineCodec& codec, Rng& rng) {
  PerceptionOutput out;
  out.queries = assemble_queries(bank, frame, policy, codec, params.world_half_extent, rng);
  GateResult gated = gate_costs(out.queries, measurements, codec, params.gate_threshold);
  out.cost_evaluations = gated.evaluations;
  out.gated_pairs = gated.gated_pairs;
  out.assignment = associate(gated.costs);

  TrackUpdate update =
      update_tracks(std::move(tracks), out.assignment, out.queries, measurements, frame, params, codec);
  out.tracks = std::move(update.tracks);
  out.detections = std::move(update.detections);
  out.refined_queries = std::move(update.refined_queries);
  out.links = std::move(update.links);
  return out;
}

}  // namespace pap::perception
