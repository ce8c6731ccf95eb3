#include "pap/prediction/forecast.hpp"

#include "pap/common/errors.hpp"
#include "pap/world/scenario.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pap::prediction {

std::string_view to_string(ForecastModel m) noexcept {
  return m == ForecastModel::ConstantTurn ? "constant_turn" : "constant_velocity";
}

ForecastModel forecast_model_from_string(std::string_view name) {
  if (name == "constant_velocity") return ForecastModel::ConstantVelocity;
  if (name == "constant_turn") return ForecastModel::ConstantTurn;
  throw ConfigError("predictor.model", "unknown forecast model '" + std::string(name) + "'");
}

void PredictorConfig::validate() const {
  if (horizon < 1) throw ConfigError("predictor.horizon", "must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("predictor.dt", "must be positive");
  if (feed_step < 1 || feed_step > horizon) throw ConfigError("predictor.feed_step", "must be in [1, horizon]");
}

double estimate_yaw_rate(const perception::Track& track, double dt) {
  const auto& h = track.state_history;
  if (h.size() < 3) return 0.0;  // the first velocity is a placeholder zero
  const perception::TrackState& a = h[h.size() - 2];
  const perception::TrackState& b = h.back();
  if (norm(a.velocity) < 1e-9 || norm(b.velocity) < 1e-9) return 0.0;
  double delta = std::atan2(b.velocity.y, b.velocity.x) - std::atan2(a.velocity.y, a.velocity.x);
  delta = std::remainder(delta, 2.0 * std::numbers::pi);
  return delta / (dt * static_cast<double>(b.frame - a.frame));
}

Forecast forecast(const perception::Track& track, const PredictorConfig& cfg) {
  cfg.validate();
  if (!track.live()) throw ContractViolation("forecast: track " + std::to_string(track.track_id) + " is terminated");
  if (track.state_history.empty()) throw ContractViolation("forecast: track has no state");

  const perception::TrackState& s = track.current();
  Forecast f;
  f.track_id = track.track_id;
  f.object_class = track.object_class;
  f.model = cfg.model;
  f.confidence = track.confidence();
  f.horizon_points.reserve(static_cast<std::size_t>(cfg.horizon));

  const double yaw_rate = cfg.model == ForecastModel::ConstantTurn ? estimate_yaw_rate(track, cfg.dt) : 0.0;
  const world::AgentState now{s.center, s.velocity, std::atan2(s.velocity.y, s.velocity.x)};
  for (int h = 1; h <= cfg.horizon; ++h) {
    const double elapsed = static_cast<double>(h) * cfg.dt;
    Vec2 p;
    if (yaw_rate == 0.0) {
      p = s.center + elapsed * s.velocity;
    } else {
      p = world::propagate(now, world::MotionModel::ConstantTurn, yaw_rate, elapsed).position;
    }
    f.horizon_points.push_back({h, p});
  }
  return f;
}

std::vector<query::Query> queries_from_forecast(const Forecast& f, std::span<const double> source_tail,
                                                const PredictorConfig& cfg, const query::AffineCodec& codec,
                                                std::int64_t frame) {
  std::vector<query::Query> out;
  for (const HorizonPoint& hp : f.horizon_points) {
    if (!cfg.feed_all && hp.step != cfg.feed_step) continue;
    query::Query q = codec.embed_center({hp.center}, source_tail);
    q.provenance = query::Provenance::Predicted;
    q.source_track_id = f.track_id;
    q.track_id = f.track_id;
    q.object_class = f.object_class;
    q.horizon_step = hp.step;
    q.confidence = f.confidence;
    q.created_frame = frame;
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Forecast> predict_and_store(const perception::TrackSet& tracks, query::QueryBank& bank, std::int64_t t,
                                        const PredictorConfig& cfg, const query::AffineCodec& codec) {
  std::vector<Forecast> forecasts;
  std::vector<query::Query> queries;
  for (const perception::Track& track : tracks.tracks) {
    if (track.status != perception::TrackStatus::Confirmed && track.status != perception::TrackStatus::Coasting) {
      continue;
    }
    Forecast f = forecast(track, cfg);
    auto qs = queries_from_forecast(f, track.last_query.tail(), cfg, codec, t);
    queries.insert(queries.end(), std::make_move_iterator(qs.begin()), std::make_move_iterator(qs.end()));
    forecasts.push_back(std::move(f));
  }
  bank.store(t, std::move(queries));
  return forecasts;
}

}  // namespace pap::prediction
