#pragma once

#include "pap/common/geometry.hpp"
#include "pap/common/object_class.hpp"
#include "pap/query/query.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace pap::perception {

enum class TrackStatus : std::uint8_t { Tentative, Confirmed, Coasting, Terminated };

std::string_view to_string(TrackStatus s) noexcept;

struct TrackState {
  std::int64_t frame = 0;
  Vec2 center;
  Vec2 velocity;
  bool coasted = false;  // dead-reckoned, not observed; never reported as a detection
};

struct Track {
  std::uint64_t track_id = 0;
  ObjectClass object_class = ObjectClass::Car;
  std::vector<TrackState> state_history;  // frames strictly increasing
  TrackStatus status = TrackStatus::Tentative;
  int hits = 0;    // consecutive matches
  int misses = 0;  // consecutive misses
  query::Query last_query;

  const TrackState& current() const { return state_history.back(); }
  bool live() const noexcept { return status != TrackStatus::Terminated; }
  /// hits / (hits + misses + 1), in [0, 1).
  double confidence() const noexcept;
};

/// Live tracks in ascending id order, plus the id counter. Ids are never reused.
struct TrackSet {
  std::vector<Track> tracks;
  std::uint64_t next_track_id = 1;

  const Track* find(std::uint64_t id) const noexcept;
  Track* find(std::uint64_t id) noexcept;
};

/// A confirmed track observed in the current frame.
struct Detection {
  std::uint64_t track_id = 0;
  ObjectClass object_class = ObjectClass::Car;
  Vec2 center;
  double confidence = 0.0;
  friend bool operator==(const Detection&, const Detection&) = default;
};

}  // namespace pap::perception
