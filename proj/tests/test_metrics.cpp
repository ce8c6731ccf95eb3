#include "doctest.h"

#include "oracles.hpp"

#include "pap/metrics/amota.hpp"
#include "pap/metrics/clear_mot.hpp"
#include "pap/metrics/report.hpp"
#include "pap/world/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace pap;
using namespace pap::metrics;

namespace {

ClassSequence to_sequence(const oracle::Case& c) { return {c.gt, c.hyps}; }

void check_against_oracle(const ClassSequence& seq, const MetricParams& params) {
  const auto got = amota_amotp(seq, params);
  const auto want = oracle::sweep(seq.gt, seq.hyps, params.match_distance, params.recall_points);
  if (seq.gt_count() == 0) {
    CHECK_FALSE(got.has_value());
    return;
  }
  REQUIRE(got.has_value());
  CHECK(std::abs(got->amota - want.amota) < 1e-9);
  CHECK(std::abs(got->amotp - want.amotp) < 1e-9);
  CHECK(std::abs(got->recall - want.recall) < 1e-9);
  CHECK(got->ids == want.ids);
}

// 3 objects over 5 frames, hypotheses exactly on ground truth; object 2 is
// dropped at frame 2 and object 3 changes track id at frame 3.
ClassSequence hand_case() {
  ClassSequence s;
  s.gt.resize(5);
  s.hyps.resize(5);
  for (int f = 0; f < 5; ++f) {
    const auto i = static_cast<std::size_t>(f);
    for (std::uint64_t o = 1; o <= 3; ++o) {
      const Vec2 c{static_cast<double>(o) * 10.0 + f, 0.0};
      s.gt[i].push_back({o, c});
      if (o == 2 && f == 2) continue;
      const std::uint64_t track = (o == 3 && f >= 3) ? 99 : 6 + o;
      s.hyps[i].push_back({track, c, 1.0});
    }
  }
  return s;
}

}  // namespace

TEST_CASE("perfect frame") {
  const std::vector<GtBox> gt{{1, {0, 0}}, {2, {5, 5}}};
  const std::vector<Hypothesis> hyps{{10, {0, 0}, 1.0}, {11, {5, 5}, 1.0}};
  MatchMemory memory{{1, 10}, {2, 11}};
  const FrameEvents e = match_frame(gt, hyps, 2.0, memory);
  CHECK(e.tp == 2);
  CHECK(e.fp == 0);
  CHECK(e.fn == 0);
  CHECK(e.ids == 0);
  CHECK(e.tp_distances == std::vector<double>{0.0, 0.0});
}

TEST_CASE("hypothesis outside the match distance") {
  const std::vector<GtBox> gt{{1, {0, 0}}};
  const std::vector<Hypothesis> hyps{{10, {5, 0}, 1.0}};
  MatchMemory memory;
  const FrameEvents e = match_frame(gt, hyps, 2.0, memory);
  CHECK(e.tp == 0);
  CHECK(e.fp == 1);
  CHECK(e.fn == 1);
  CHECK(e.tp_distances.empty());
}

TEST_CASE("hand-traced identity switch") {
  // frame 0: no hypothesis; frame 1: track 7; frame 2: track 9; frame 3: track 9
  MatchMemory memory;
  const std::vector<GtBox> gt{{1, {0, 0}}};
  const std::vector<Hypothesis> none;
  const std::vector<Hypothesis> h7{{7, {0.5, 0}, 1.0}};
  const std::vector<Hypothesis> h9{{9, {0.3, 0}, 1.0}};
  struct Expected {
    std::int64_t tp, fp, fn, ids;
  };
  const std::vector<std::pair<const std::vector<Hypothesis>*, Expected>> trace{
      {&none, {0, 0, 1, 0}}, {&h7, {1, 0, 0, 0}}, {&h9, {1, 0, 0, 1}}, {&h9, {1, 0, 0, 0}}};
  for (std::size_t f = 0; f < trace.size(); ++f) {
    const FrameEvents e = match_frame(gt, *trace[f].first, 2.0, memory, static_cast<std::int64_t>(f));
    INFO("frame " << f);
    CHECK(e.tp == trace[f].second.tp);
    CHECK(e.fp == trace[f].second.fp);
    CHECK(e.fn == trace[f].second.fn);
    CHECK(e.ids == trace[f].second.ids);
  }
  CHECK(memory.at(1) == 9);
}

TEST_CASE("equal distances resolve toward the remembered track") {
  const std::vector<GtBox> gt{{1, {0, 0}}};
  const std::vector<Hypothesis> hyps{{4, {1, 0}, 1.0}, {5, {-1, 0}, 1.0}};
  MatchMemory memory{{1, 5}};
  const FrameEvents e = match_frame(gt, hyps, 2.0, memory);
  CHECK(e.ids == 0);
  CHECK(memory.at(1) == 5);
}

TEST_CASE("MOTAR formula") {
  CHECK(*motar(0, 0, 0, 10, 1.0) == 1.0);
  CHECK(*motar(10, 20, 20, 100, 0.5) == doctest::Approx(1.0));
  CHECK(*motar(10, 30, 40, 100, 0.5) == doctest::Approx(0.4));
  CHECK(*motar(100, 100, 100, 100, 0.5) == 0.0);  // clamped, never negative
  CHECK_FALSE(motar(0, 0, 0, 0, 0.5).has_value());
}

TEST_CASE("oracle tracker scores perfectly") {
  ClassSequence s;
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int f = 0; f < 15; ++f) {
    s.gt.emplace_back();
    s.hyps.emplace_back();
    for (std::uint64_t o = 1; o <= 4; ++o) {
      const Vec2 c{u(gen), u(gen)};
      s.gt.back().push_back({o, c});
      s.hyps.back().push_back({o, c, 1.0});
    }
  }
  const auto m = amota_amotp(s, MetricParams{});
  REQUIRE(m.has_value());
  CHECK(m->amota == 1.0);
  CHECK(m->amotp == 0.0);
  CHECK(m->recall == 1.0);
  CHECK(m->ids == 0);
}

TEST_CASE("no hypotheses") {
  ClassSequence s;
  s.gt = {{{1, {0, 0}}}, {{1, {1, 0}}}};
  s.hyps = {{}, {}};
  const auto m = amota_amotp(s, MetricParams{});
  REQUIRE(m.has_value());
  CHECK(m->amota == 0.0);
  CHECK(m->recall == 0.0);
  CHECK(m->amotp == 2.0);
  CHECK_FALSE(amota_amotp(ClassSequence{{{}, {}}, {{}, {}}}, MetricParams{}).has_value());
}

TEST_CASE("hand case: dropped frame and one identity switch") {
  const ClassSequence s = hand_case();
  const auto m = amota_amotp(s, MetricParams{});
  REQUIRE(m.has_value());
  // P = 15, TP = 14, FN = 1, IDS = 1, FP = 0. Targets i/40 are reached up
  // to i = 37; MOTAR(r) = min(1, 13 / (15 r)), which is 1 up to i = 34.
  double expected = 34.0;
  for (int i = 35; i <= 37; ++i) expected += 13.0 * 40.0 / (15.0 * i);
  expected /= 40.0;
  CHECK(std::abs(m->amota - expected) < 1e-12);
  CHECK(m->amotp == 0.0);
  CHECK(m->recall == doctest::Approx(14.0 / 15.0));
  CHECK(m->ids == 1);
  check_against_oracle(s, MetricParams{});
}

TEST_CASE("agrees with the brute-force sweep on randomized cases") {
  std::mt19937_64 gen(20240611);
  for (int i = 0; i < 60; ++i) {
    INFO("case " << i);
    check_against_oracle(to_sequence(oracle::random_case(gen)), MetricParams{});
  }
  MetricParams coarse;
  coarse.recall_points = 7;
  coarse.match_distance = 1.0;
  for (int i = 0; i < 20; ++i) check_against_oracle(to_sequence(oracle::random_case(gen)), coarse);
}

TEST_CASE("metrics ignore hypothesis order and track labels") {
  std::mt19937_64 gen(77);
  for (int i = 0; i < 25; ++i) {
    const ClassSequence s = to_sequence(oracle::random_case(gen));
    if (s.gt_count() == 0) continue;
    const auto base = *amota_amotp(s, MetricParams{});

    ClassSequence shuffled = s;
    for (auto& f : shuffled.hyps) std::shuffle(f.begin(), f.end(), gen);
    ClassSequence relabeled = s;
    for (auto& f : relabeled.hyps)
      for (auto& h : f) h.track_id = h.track_id * 7919 + 13;  // a bijection

    for (const ClassSequence* v : {&shuffled, &relabeled}) {
      const auto m = *amota_amotp(*v, MetricParams{});
      CHECK(m.amota == doctest::Approx(base.amota).epsilon(1e-12));
      CHECK(m.amotp == doctest::Approx(base.amotp).epsilon(1e-12));
      CHECK(m.recall == base.recall);
      CHECK(m.ids == base.ids);
    }
  }
}

TEST_CASE("a pure false positive never raises AMOTA") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> far(500, 600), conf(0.05, 1.0);
  for (int i = 0; i < 30; ++i) {
    ClassSequence s = to_sequence(oracle::random_case(gen));
    if (s.gt_count() == 0) continue;
    const double before = amota_amotp(s, MetricParams{})->amota;
    s.hyps[static_cast<std::size_t>(i) % s.hyps.size()].push_back({99999, {far(gen), far(gen)}, conf(gen)});
    CHECK(amota_amotp(s, MetricParams{})->amota <= before + 1e-12);
  }
}

TEST_CASE("metric ranges hold") {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 40; ++i) {
    const auto m = amota_amotp(to_sequence(oracle::random_case(gen)), MetricParams{});
    if (!m) continue;
    CHECK(m->amota >= 0.0);
    CHECK(m->amota <= 1.0);
    CHECK(m->recall >= 0.0);
    CHECK(m->recall <= 1.0);
    CHECK(m->amotp >= 0.0);
    CHECK(m->ids >= 0);
  }
}

TEST_CASE("report: absent classes and aggregate mean") {
  RunLog log;
  log.frames.push_back({{{1, ObjectClass::Car, {0, 0}}, {2, ObjectClass::Bus, {10, 0}}},
                        {{5, ObjectClass::Car, {0, 0}, 1.0}}});
  const TrackingReport r = build_report(log, {1, 0.5, 0.0, 10, 20, 3}, MetricParams{});
  CHECK(r.per_class.size() == 2);
  CHECK(r.per_class.count(ObjectClass::Pedestrian) == 0);
  CHECK(r.per_class.at(ObjectClass::Car).amota == 1.0);
  CHECK(r.per_class.at(ObjectClass::Bus).amota == 0.0);
  CHECK(r.aggregate.amota == 0.5);
  CHECK(r.counters.fps == 2.0);

  std::map<ObjectClass, MetricSummary> two{{ObjectClass::Car, {0.2, 1, 0.5, 3}}, {ObjectClass::Truck, {0.4, 2, 0.7, 4}}};
  const MetricSummary agg = aggregate_of(two);
  CHECK(agg.amota == doctest::Approx(0.3));
  CHECK(agg.amotp == doctest::Approx(1.5));
  CHECK(agg.ids == 7);
}

TEST_CASE("report JSON round-trips and has the normative keys") {
  TrackingReport r;
  r.per_class[ObjectClass::Car] = {0.123456789012345, 0.9876543210987, 0.5, 3};
  r.per_class[ObjectClass::Motor] = {1.0 / 3.0, 0.1, 0.25, 0};
  r.aggregate = aggregate_of(r.per_class);
  r.counters = {200, 0.0123, 200 / 0.0123, 40000, 123456, 789};
  r.measurement_hash = "00ff00ff00ff00ff";
  r.config_echo = {{"seed", 3}, {"arm", "pap"}};
  const nlohmann::json doc = report_to_json(r);
  for (const char* k : {"amota", "amotp", "recall", "ids"}) {
    CHECK(doc.at("per_class").at("car").contains(k));
    CHECK(doc.at("aggregate").contains(k));
  }
  for (const char* k : {"frames", "wall_seconds", "fps", "query_refinements", "cost_evaluations"}) {
    CHECK(doc.at("counters").contains(k));
  }
  CHECK(doc.contains("config_echo"));

  const TrackingReport back = report_from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back.per_class == r.per_class);
  CHECK(back.aggregate == r.aggregate);
  CHECK(back.counters == r.counters);
  CHECK(back.measurement_hash == r.measurement_hash);
  CHECK(back.config_echo == r.config_echo);
  CHECK(report_to_json(back).dump() == doc.dump());
}

TEST_CASE("report CSV has one row per class and metric") {
  TrackingReport r;
  r.per_class[ObjectClass::Car] = {0.5, 1.0, 0.6, 2};
  r.per_class[ObjectClass::Bus] = {0.1, 1.5, 0.2, 0};
  r.aggregate = aggregate_of(r.per_class);
  const std::string csv = report_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 4);  // header + (2 classes + all) x 4 metrics
  CHECK(csv.find("car,amota,") != std::string::npos);
  CHECK(csv.find("all,ids,") != std::string::npos);
}

TEST_CASE("fingerprint ignores wall time only") {
  TrackingReport r;
  r.per_class[ObjectClass::Car] = {0.5, 1.0, 0.6, 2};
  r.counters = {10, 0.1, 100, 5, 6, 7};
  TrackingReport slower = r;
  slower.counters.wall_seconds = 0.2;
  slower.counters.fps = 50;
  CHECK(report_fingerprint(r) == report_fingerprint(slower));
  TrackingReport other = r;
  other.counters.cost_evaluations = 7;
  CHECK(report_fingerprint(r) != report_fingerprint(other));
}

TEST_CASE("ground truth fed back as hypotheses scores perfectly on generated scenarios") {
  world::ScenarioConfig cfg;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const world::Scenario s = world::generate_scenario(cfg, seed);
    RunLog log;
    for (std::int64_t f = 0; f < s.frame_count; ++f) {
      auto gt = world::ground_truth(s, f, 75.0);
      std::vector<perception::Detection> dets;
      for (const auto& g : gt) dets.push_back({g.agent_id, g.object_class, g.center, 1.0});
      log.frames.push_back({std::move(gt), std::move(dets)});
    }
    const TrackingReport r = build_report(log, {}, MetricParams{});
    for (const auto& [c, m] : r.per_class) {
      CHECK(m.amota == 1.0);
      CHECK(m.amotp == 0.0);
      CHECK(m.ids == 0);
    }
  }
}
