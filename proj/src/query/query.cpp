#include "pap/query/query.hpp"

#include "pap/common/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pap::query {

void check_query(const Query& q, std::size_t dim) {
  if (q.embedding.size() != dim) {
    throw ShapeError("query embedding has dimension " + std::to_string(q.embedding.size()) + ", expected " +
                     std::to_string(dim));
  }
  if (q.is_predicted() && !q.source_track_id) throw ContractViolation("predicted query without source track");
  if (!(q.confidence >= 0.0 && q.confidence <= 1.0)) throw ContractViolation("query confidence outside [0,1]");
}

Mat2 Mat2::inverse() const {
  const double d = det();
  if (d == 0.0 || !std::isfinite(d)) throw NumericError("affine codec matrix is singular");
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

AffineCodec::AffineCodec(std::size_t dim, Mat2 a, Vec2 b) : dim_(dim), a_(a), a_inv_(a.inverse()), b_(b) {
  if (dim < kCenterSlots) throw ShapeError("embedding dimension must be >= 2");
  if (!is_finite(b)) throw NumericError("affine codec offset must be finite");
}

AffineCodec AffineCodec::for_world(std::size_t dim, double world_half_extent) {
  return AffineCodec(dim, Mat2{world_half_extent, 0.0, 0.0, world_half_extent}, Vec2{});
}

CenterHypothesis AffineCodec::decode_reference(const Query& q) const {
  if (q.embedding.size() != dim_) {
    throw ShapeError("decode_reference: dimension " + std::to_string(q.embedding.size()) + " != " + std::to_string(dim_));
  }
  if (!std::all_of(q.embedding.begin(), q.embedding.end(), [](double v) { return std::isfinite(v); })) {
    throw NumericError("decode_reference: non-finite embedding");
  }
  return {a_ * Vec2{q.embedding[0], q.embedding[1]} + b_};
}

Query AffineCodec::embed_center(CenterHypothesis c, std::span<const double> tail) const {
  if (tail.size() != tail_dim()) {
    throw ShapeError("embed_center: tail dimension " + std::to_string(tail.size()) + " != " + std::to_string(tail_dim()));
  }
  const Vec2 slots = a_inv_ * (c.center - b_);
  Query q;
  q.embedding.reserve(dim_);
  q.embedding.push_back(slots.x);
  q.embedding.push_back(slots.y);
  q.embedding.insert(q.embedding.end(), tail.begin(), tail.end());
  return q;
}

}  // namespace pap::query
