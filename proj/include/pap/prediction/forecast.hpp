#pragma once

#include "pap/perception/track.hpp"
#include "pap/query/query.hpp"
#include "pap/query/query_bank.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pap::prediction {

enum class ForecastModel : std::uint8_t { ConstantVelocity, ConstantTurn };

std::string_view to_string(ForecastModel m) noexcept;
ForecastModel forecast_model_from_string(std::string_view name);

struct PredictorConfig {
  int horizon = 6;     // steps
  double dt = 0.1;     // seconds per step, equal to the scenario dt
  int feed_step = 1;   // horizon step that feeds the next frame's bank
  bool feed_all = false;  // emit one query per horizon step instead
  ForecastModel model = ForecastModel::ConstantVelocity;

  void validate() const;
};

struct HorizonPoint {
  int step = 0;
  Vec2 center;
  friend bool operator==(const HorizonPoint&, const HorizonPoint&) = default;
};

struct Forecast {
  std::uint64_t track_id = 0;
  ObjectClass object_class = ObjectClass::Car;
  std::vector<HorizonPoint> horizon_points;  // steps 1..H
  ForecastModel model = ForecastModel::ConstantVelocity;
  double confidence = 0.0;
};

/// Yaw rate implied by the last two velocity estimates, 0 when undefined.
double estimate_yaw_rate(const perception::Track& track, double dt);

/// Extrapolates the track's current state H steps ahead.
/// Throws pap::ContractViolation for terminated or empty tracks.
Forecast forecast(const perception::Track& track, const PredictorConfig& cfg);

/// Embeds the selected horizon point(s) with the source track's tail.
/// Throws pap::ShapeError if `source_tail` does not fit the codec.
std::vector<query::Query> queries_from_forecast(const Forecast& f, std::span<const double> source_tail,
                                                const PredictorConfig& cfg, const query::AffineCodec& codec,
                                                std::int64_t frame);

/// Forecasts every confirmed or coasting track and stores the union of
/// their queries at bank[t]. Returns the forecasts (ascending track id).
std::vector<Forecast> predict_and_store(const perception::TrackSet& tracks, query::QueryBank& bank, std::int64_t t,
                                        const PredictorConfig& cfg, const query::AffineCodec& codec);

}  // namespace pap::prediction
