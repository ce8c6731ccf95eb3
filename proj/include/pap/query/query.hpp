#pragma once

#include "pap/common/geometry.hpp"
#include "pap/common/object_class.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pap::query {

inline constexpr std::size_t kCenterSlots = 2;
inline constexpr std::size_t kDefaultDim = 16;

enum class Provenance : std::uint8_t { Random, Predicted };

/// Unit of communication between perception and prediction.
///
/// Slots [0, 2) of the embedding encode a BEV center through the codec's
/// affine map; slots [2, D) are the identity tail. A Predicted query always
/// names its source track and carries that track's class, which gates it to
/// measurements of the same class.
struct Query {
  std::vector<double> embedding;
  Provenance provenance = Provenance::Random;
  std::optional<std::uint64_t> source_track_id;
  int horizon_step = 0;  // forecast step for Predicted queries; 0 = current-frame refinement
  std::optional<std::uint64_t> track_id;
  std::optional<ObjectClass> object_class;
  double confidence = 0.0;
  std::int64_t created_frame = 0;

  bool is_predicted() const noexcept { return provenance == Provenance::Predicted; }
  std::span<const double> tail() const noexcept {
    return std::span<const double>(embedding).subspan(std::min(kCenterSlots, embedding.size()));
  }

  friend bool operator==(const Query&, const Query&) = default;
};

struct CenterHypothesis {
  Vec2 center;
};

/// Throws pap::ShapeError unless q has dimension `dim`, and
/// pap::ContractViolation if the provenance/confidence invariants fail.
void check_query(const Query& q, std::size_t dim);

/// Row-major 2x2 matrix.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  double det() const noexcept { return a11 * a22 - a12 * a21; }
  Vec2 operator*(Vec2 v) const noexcept { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  Mat2 inverse() const;  // throws pap::NumericError when singular
};

/// Fixed, mutually inverse reference-point decoder and center embedder.
///
/// decode: center = A * e[0:2] + b
/// embed:  e[0:2] = A^-1 * (center - b), e[2:D) = tail
class AffineCodec {
 public:
  AffineCodec(std::size_t dim, Mat2 a, Vec2 b);

  /// A = half_extent * I, b = 0: slot values of in-world centers lie in [-1, 1].
  static AffineCodec for_world(std::size_t dim, double world_half_extent);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t tail_dim() const noexcept { return dim_ - kCenterSlots; }
  const Mat2& matrix() const noexcept { return a_; }
  Vec2 offset() const noexcept { return b_; }

  /// Throws pap::ShapeError on a dimension mismatch and pap::NumericError on
  /// non-finite embedding values.
  CenterHypothesis decode_reference(const Query& q) const;

  /// Returns a Random-provenance query; callers set provenance and metadata.
  /// Throws pap::ShapeError unless tail.size() == dim() - 2.
  Query embed_center(CenterHypothesis c, std::span<const double> tail) const;

 private:
  std::size_t dim_;
  Mat2 a_;
  Mat2 a_inv_;
  Vec2 b_;
};

}  // namespace pap::query
