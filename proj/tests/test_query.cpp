#include "doctest.h"

#include "pap/common/errors.hpp"
#include "pap/common/rng.hpp"
#include "pap/query/query.hpp"
#include "pap/query/query_bank.hpp"

#include <cmath>
#include <limits>

using namespace pap;
using namespace pap::query;

namespace {

Query predicted(std::uint64_t track, double x = 0.0) {
  const AffineCodec codec = AffineCodec::for_world(kDefaultDim, 50.0);
  Query q = codec.embed_center({{x, 0.0}}, std::vector<double>(codec.tail_dim(), 0.0));
  q.provenance = Provenance::Predicted;
  q.source_track_id = track;
  q.horizon_step = 1;
  q.object_class = ObjectClass::Car;
  return q;
}

}  // namespace

TEST_CASE("embed then decode is the identity") {
  const AffineCodec codec = AffineCodec::for_world(16, 50.0);
  const std::vector<double> tail(14, 0.25);
  const Query q = codec.embed_center({{3.0, -4.0}}, tail);
  const Vec2 c = codec.decode_reference(q).center;
  CHECK(std::abs(c.x - 3.0) < 1e-9);
  CHECK(std::abs(c.y + 4.0) < 1e-9);
  CHECK(std::vector<double>(q.tail().begin(), q.tail().end()) == tail);
}

TEST_CASE("zero embedding decodes to the offset") {
  const AffineCodec codec = AffineCodec::for_world(16, 50.0);
  Query q;
  q.embedding.assign(16, 0.0);
  CHECK(codec.decode_reference(q).center == Vec2{0.0, 0.0});

  const AffineCodec shifted(16, Mat2{2.0, 0.0, 0.0, 2.0}, {1.0, -1.0});
  CHECK(shifted.decode_reference(q).center == Vec2{1.0, -1.0});
}

TEST_CASE("origin with zero tail embeds to all zeros") {
  const AffineCodec codec = AffineCodec::for_world(16, 50.0);
  const Query q = codec.embed_center({{0.0, 0.0}}, std::vector<double>(14, 0.0));
  CHECK(q.embedding == std::vector<double>(16, 0.0));
}

TEST_CASE("random centers round-trip against an explicit inverse") {
  // a general (non-diagonal) affine map
  const Mat2 a{30.0, 5.0, -4.0, 45.0};
  const Vec2 b{2.5, -1.0};
  const AffineCodec codec(16, a, b);
  const double det = a.a11 * a.a22 - a.a12 * a.a21;
  Rng rng(99);
  double worst_round_trip = 0.0;
  double worst_slot = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec2 c{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const Query q = codec.embed_center({c}, std::vector<double>(14, 0.0));
    // slots hold A^-1 (c - b), with A^-1 written out by hand
    const Vec2 d = c - b;
    const double e0 = (a.a22 * d.x - a.a12 * d.y) / det;
    const double e1 = (-a.a21 * d.x + a.a11 * d.y) / det;
    worst_slot = std::max({worst_slot, std::abs(q.embedding[0] - e0), std::abs(q.embedding[1] - e1)});
    const Vec2 back = codec.decode_reference(q).center;
    worst_round_trip = std::max({worst_round_trip, std::abs(back.x - c.x), std::abs(back.y - c.y)});
  }
  CHECK(worst_round_trip < 1e-9);
  CHECK(worst_slot < 1e-12);
}

TEST_CASE("codec shape and numeric errors") {
  const AffineCodec codec = AffineCodec::for_world(16, 50.0);
  CHECK_THROWS_AS(codec.embed_center({{0, 0}}, std::vector<double>(3, 0.0)), ShapeError);
  Query q;
  q.embedding.assign(8, 0.0);
  CHECK_THROWS_AS(codec.decode_reference(q), ShapeError);
  q.embedding.assign(16, 0.0);
  q.embedding[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(codec.decode_reference(q), NumericError);
  CHECK_THROWS_AS(AffineCodec(16, Mat2{1, 2, 2, 4}, {}), NumericError);
}

TEST_CASE("query invariants") {
  Query q = predicted(3);
  CHECK_NOTHROW(check_query(q, 16));
  CHECK_THROWS_AS(check_query(q, 12), ShapeError);
  q.source_track_id.reset();
  CHECK_THROWS_AS(check_query(q, 16), ContractViolation);
  q = predicted(3);
  q.confidence = 1.5;
  CHECK_THROWS_AS(check_query(q, 16), ContractViolation);
}

TEST_CASE("bank store and fetch") {
  QueryBank bank(4);
  const std::vector<Query> qs{predicted(1, 1.0), predicted(2, 2.0)};
  bank.store(5, qs);
  CHECK(bank.fetch(5) == qs);
  CHECK(bank.fetch(5) == bank.fetch(5));
  CHECK(bank.fetch(99).empty());
  CHECK(QueryBank{}.fetch(99).empty());
}

TEST_CASE("bank evicts the oldest index past capacity") {
  QueryBank bank(3);
  for (std::int64_t t = 1; t <= 4; ++t) {
    bank.store(t, {predicted(static_cast<std::uint64_t>(t))});
    CHECK(bank.size() <= 3);
  }
  CHECK(bank.fetch(1).empty());
  for (std::int64_t t = 2; t <= 4; ++t) CHECK(bank.fetch(t).size() == 1);
  CHECK(bank.time_indices() == std::vector<std::int64_t>{2, 3, 4});
}

TEST_CASE("bank refuses random queries and stays unchanged") {
  QueryBank bank(3);
  bank.store(1, {predicted(1)});
  Query r = predicted(2);
  r.provenance = Provenance::Random;
  r.source_track_id.reset();
  CHECK_THROWS_AS(bank.store(1, {predicted(3), r}), ContractViolation);
  REQUIRE(bank.fetch(1).size() == 1);
  CHECK(bank.fetch(1)[0].source_track_id == 1u);
}
