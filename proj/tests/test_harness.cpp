#include "doctest.h"

#include "pap/common/errors.hpp"
#include "pap/harness/compare.hpp"
#include "pap/harness/config.hpp"
#include "pap/harness/debug_dump.hpp"
#include "pap/harness/runner.hpp"
#include "pap/harness/sweep.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pap;
using namespace pap::harness;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pap_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.seeds = {1, 2, 3};
  cfg.scenario.frame_count = 60;
  return cfg;
}

// Report JSON with the two machine-dependent counters blanked.
std::string stable_json(metrics::TrackingReport r) {
  r.counters.wall_seconds = 0.0;
  r.counters.fps = 0.0;
  return metrics::report_to_json(r).dump();
}

metrics::TrackingReport report_with(double amota, double fps) {
  metrics::TrackingReport r;
  r.aggregate.amota = amota;
  r.counters.frames = 100;
  r.counters.fps = fps;
  r.counters.wall_seconds = 100.0 / fps;
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("run determinism: same config and seed give identical reports") {
  const ExperimentConfig cfg = small_config();
  for (const Arm& arm : {Arm{"baseline", 0.0}, Arm{"pap", 0.8}}) {
    const RunResult a = run_single(cfg, 2, arm);
    const RunResult b = run_single(cfg, 2, arm);
    CHECK(stable_json(a.report) == stable_json(b.report));
    CHECK(metrics::report_fingerprint(a.report) == metrics::report_fingerprint(b.report));
  }
}

TEST_CASE("run determinism: worker count does not change any report") {
  const ExperimentConfig cfg = small_config();
  const std::vector<Arm> arms{{"baseline", 0.0}, {"pap", 0.8}};
  const ExperimentResult one = run_arms(cfg, arms, 1);
  const ExperimentResult four = run_arms(cfg, arms, 4);
  for (std::size_t a = 0; a < arms.size(); ++a)
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s)
      CHECK(stable_json(one.reports[a][s]) == stable_json(four.reports[a][s]));
}

TEST_CASE("paired arms see identical measurements") {
  const ExperimentConfig cfg = small_config();
  for (std::uint64_t seed : cfg.seeds) {
    const RunResult b = run_single(cfg, seed, {"baseline", 0.0});
    const RunResult p = run_single(cfg, seed, {"pap", 0.8});
    CHECK(b.report.measurement_hash == p.report.measurement_hash);
    CHECK(b.report.measurement_hash.size() == 16);
  }
  CHECK(run_single(cfg, 1, {"pap", 0.8}).report.measurement_hash !=
        run_single(cfg, 2, {"pap", 0.8}).report.measurement_hash);
}

TEST_CASE("report echoes config, seed and arm") {
  const ExperimentConfig cfg = small_config();
  const RunResult r = run_single(cfg, 3, {"pap", 0.8});
  CHECK(r.report.config_echo.at("run").at("seed") == 3);
  CHECK(r.report.config_echo.at("run").at("arm") == "pap");
  CHECK(r.report.config_echo.at("schema_version") == 1);
  CHECK(r.report.counters.frames == 60);
  CHECK(r.report.counters.wall_seconds > 0.0);
  CHECK(r.report.counters.fps == doctest::Approx(60.0 / r.report.counters.wall_seconds));
}

TEST_CASE("single noise-free agent in pap mode scores perfectly") {
  ExperimentConfig cfg;
  cfg.mode = Mode::Pap;
  cfg.scenario.frame_count = 40;
  cfg.scenario.world_half_extent = 10.0;
  for (ObjectClass c : kAllClasses) cfg.scenario.profile(c).min_count = cfg.scenario.profile(c).max_count = 0;
  cfg.scenario.explicit_agents.push_back(
      {ObjectClass::Car, world::MotionModel::ConstantVelocity, {-5, 2}, {4, -1}, 0, 0, -1});
  cfg.sensor.position_noise_sigma = 0.0;
  cfg.sensor.miss_probability = 0.0;
  cfg.sensor.clutter_rate = 0.0;
  // report from the first frame on
  cfg.perception.confirm_threshold = 1;
  const RunResult r = run_single(cfg, 1, {"pap", 0.8});
  CHECK(r.report.aggregate.amota == 1.0);
  CHECK(r.report.aggregate.amotp == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.report.aggregate.ids == 0);
}

TEST_CASE("reduced budget never costs more than the baseline per frame") {
  ExperimentConfig cfg = small_config();
  cfg.policy.budget = perception::QueryBudget::Reduced;
  for (std::uint64_t seed : cfg.seeds) {
    const RunResult b = run_single(cfg, seed, {"baseline", 0.0}, true);
    const RunResult p = run_single(cfg, seed, {"pap", 0.8}, true);
    REQUIRE(b.frame_cost_evaluations.size() == p.frame_cost_evaluations.size());
    for (std::size_t f = 0; f < b.frame_cost_evaluations.size(); ++f) {
      REQUIRE(p.frame_cost_evaluations[f] <= b.frame_cost_evaluations[f]);
      REQUIRE(p.trace->frames[f].queries.size() <= b.trace->frames[f].queries.size());
    }
    CHECK(p.report.counters.query_refinements < b.report.counters.query_refinements);
  }
}

// --- comparison ---------------------------------------------------------------

TEST_CASE("percentage fixture: AMOTA 0.359 -> 0.395 is +10.0%") {
  const SeedReports base{{1, report_with(0.359, 14.0)}};
  const SeedReports pap{{1, report_with(0.395, 16.0)}};
  const ComparisonSummary s = compare(base, pap);
  const MetricComparison& a = s.metric("amota");
  CHECK(a.absolute_delta == doctest::Approx(0.036).epsilon(1e-12));
  REQUIRE(a.relative_delta.has_value());
  CHECK(std::abs(*a.relative_delta * 100.0 - 10.0) <= 0.2);
  const MetricComparison& fps = s.counter("fps");
  REQUIRE(fps.relative_delta.has_value());
  CHECK(std::abs(*fps.relative_delta * 100.0 - 14.3) <= 0.2);
  CHECK(a.baseline_std == 0.0);
}

TEST_CASE("identical report sets give zero deltas") {
  const ExperimentConfig cfg = small_config();
  const ExperimentResult r = run_arms(cfg, {{"pap", 0.8}}, 1);
  const SeedReports reports = paired(r.seeds, r.reports[0]);
  const ComparisonSummary s = compare(reports, reports);
  for (const MetricComparison& m : s.metrics) {
    CHECK(m.absolute_delta == 0.0);
    if (m.relative_delta) CHECK(*m.relative_delta == 0.0);
  }
  CHECK(s.amota_sign_test.ties == 3);
  CHECK(s.amota_sign_test.p_value == 1.0);
  for (const SeedPair& p : s.seeds) CHECK(p.same_measurements);
}

TEST_CASE("relative delta is absent for a zero baseline") {
  CHECK_FALSE(relative_delta(0.0, 1.0).has_value());
  CHECK(*relative_delta(-2.0, -1.0) == doctest::Approx(0.5));
}

TEST_CASE("compare rejects mismatched seed sets") {
  const SeedReports a{{1, report_with(0.3, 10)}, {2, report_with(0.3, 10)}};
  const SeedReports b{{1, report_with(0.3, 10)}, {3, report_with(0.3, 10)}};
  CHECK_THROWS_AS(compare(a, b), ContractViolation);
  CHECK_THROWS_AS(compare(a, SeedReports{{1, report_with(0.3, 10)}}), ContractViolation);
}

TEST_CASE("compare pairs by seed, not by position") {
  const SeedReports a{{1, report_with(0.1, 10)}, {2, report_with(0.5, 10)}};
  const SeedReports b{{2, report_with(0.6, 10)}, {1, report_with(0.2, 10)}};
  const ComparisonSummary s = compare(a, b);
  CHECK(s.amota_sign_test.wins == 2);
  CHECK(s.seeds[0].seed == 1);
  CHECK(s.seeds[0].pap.amota == 0.2);
}

TEST_CASE("sign test p-values") {
  std::vector<double> base(20, 0.0), pap(20, 0.0);
  for (int i = 0; i < 20; ++i) pap[static_cast<std::size_t>(i)] = i < 15 ? 1.0 : -1.0;
  const SignTest t = sign_test(base, pap);
  CHECK(t.wins == 15);
  CHECK(t.losses == 5);
  // sum_{k=15}^{20} C(20,k) / 2^20 = 21700 / 1048576
  CHECK(t.p_value == doctest::Approx(21700.0 / 1048576.0).epsilon(1e-12));
  CHECK(sign_test({0, 0}, {1, 1}).p_value == doctest::Approx(0.25));
  CHECK(sign_test({1, 1}, {0, 0}, false).wins == 2);
}

TEST_CASE("comparison serializes to JSON and CSV") {
  const ComparisonSummary s = compare({{1, report_with(0.359, 14.0)}}, {{1, report_with(0.395, 16.0)}});
  const json doc = comparison_to_json(s);
  CHECK(doc.at("metrics").size() == 4);
  CHECK(doc.at("seeds").size() == 1);
  CHECK(doc.at("amota_sign_test").at("wins") == 1);
  const std::string csv = comparison_csv(s);
  CHECK(csv.rfind("kind,name,", 0) == 0);
  CHECK(csv.find("metric,amota,") != std::string::npos);
  CHECK(csv.find("counter,fps,") != std::string::npos);
}

// --- sweep --------------------------------------------------------------------

TEST_CASE("sweep at rho 0 reproduces the baseline arm") {
  const ExperimentConfig cfg = small_config();
  const SweepTable t = sweep_rho(cfg, {0.0});
  REQUIRE(t.rows.size() == 1);
  const ExperimentResult base = run_arms(cfg, {{"baseline", 0.0}}, 1);
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) CHECK(t.rows[0].per_seed[s] == base.reports[0][s].aggregate);
}

TEST_CASE("sweep rows are sorted by rho and share seeds") {
  const ExperimentConfig cfg = small_config();
  const SweepTable t = sweep_rho(cfg, {1.0, 0.0, 0.5});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].rho == 0.0);
  CHECK(t.rows[1].rho == 0.5);
  CHECK(t.rows[2].rho == 1.0);
  for (const SweepRow& r : t.rows) CHECK(r.per_seed.size() == cfg.seeds.size());
  const std::string csv = sweep_csv(t);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("amota_seed1,amota_seed2,amota_seed3") != std::string::npos);
  CHECK(csv.find("\n0,") < csv.find("\n0.5,"));
  CHECK(csv.find("\n0.5,") < csv.find("\n1,"));
  CHECK_THROWS_AS(sweep_rho(cfg, {1.5}), ConfigError);
}

// --- debug dump ---------------------------------------------------------------

TEST_CASE("dump then replay reproduces the report byte for byte") {
  ExperimentConfig cfg = small_config();
  const RunResult r = run_single(cfg, 2, {"pap", 0.8}, true);
  const fs::path dir = scratch_dir("dump");
  write_dump(*r.trace, dir / "d.jsonl");

  const std::string text = read_file(dir / "d.jsonl");
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + cfg.scenario.frame_count);
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  CHECK(json::parse(line).at("type") == "header");
  std::getline(lines, line);
  const json frame = json::parse(line);
  for (const char* k : {"frame", "queries", "assignment", "tracks", "forecasts"}) CHECK(frame.contains(k));

  const metrics::TrackingReport back = replay(read_dump(dir / "d.jsonl"));
  CHECK(metrics::report_to_json(back).dump(2) == metrics::report_to_json(r.report).dump(2));
}

TEST_CASE("replay recomputes counters and catches tampering") {
  const RunResult r = run_single(small_config(), 1, {"pap", 0.8}, true);
  RunTrace t = *r.trace;
  CHECK_NOTHROW(replay(t));

  RunTrace fewer = t;
  fewer.frames[10].queries.pop_back();
  CHECK_THROWS_AS(replay(fewer), ContractViolation);

  RunTrace moved = t;
  REQUIRE_FALSE(moved.frames[5].measurements.empty());
  moved.frames[5].measurements[0].center.x += 1e-6;
  CHECK_THROWS_AS(replay(moved), ContractViolation);
}

TEST_CASE("empty run dumps a valid header and nothing else") {
  RunTrace t;
  t.gate_threshold = 4.0;
  t.measurement_hash = "cbf29ce484222325";
  std::stringstream s;
  write_dump(t, s);
  const std::string text = s.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  const RunTrace back = read_dump(s);
  CHECK(back.frames.empty());
  const metrics::TrackingReport r = replay(back);
  CHECK(r.per_class.empty());
}

TEST_CASE("malformed dumps are config errors") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_dump(empty), ConfigError);
  std::stringstream junk("{\"type\": \"frame\"}\n");
  CHECK_THROWS_AS(read_dump(junk), ConfigError);
  CHECK_THROWS_AS(read_dump(fs::path("/nonexistent/d.jsonl")), IoError);
}

// --- config -------------------------------------------------------------------

TEST_CASE("config parsing is strict") {
  auto field_of = [](const json& doc) {
    try {
      parse_config(doc);
    } catch (const ConfigError& e) {
      return std::string(e.field());
    }
    return std::string("<accepted>");
  };
  CHECK(field_of({{"schema_version", 1}}) == "<accepted>");
  CHECK(field_of(json::object()) == "schema_version");
  CHECK(field_of({{"schema_version", 2}}) == "schema_version");
  CHECK(field_of({{"schema_version", 1}, {"colour", "red"}}) == "colour");
  CHECK(field_of({{"schema_version", 1}, {"sensor", {{"sigma", 0.5}}}}) == "sensor.sigma");
  CHECK(field_of({{"schema_version", 1}, {"seeds", json::array()}}) == "seeds");
  CHECK(field_of({{"schema_version", 1}, {"mode", "rho_sweep"}, {"sweep_rho", {0.0, 1.2}}}) == "sweep_rho");
  CHECK(field_of({{"schema_version", 1}, {"policy", {{"replace_fraction", 1.5}}}}) == "policy.replace_fraction");
  CHECK(field_of({{"schema_version", 1}, {"scenario", {{"frame_count", 0}}}}) == "scenario.frame_count");
  CHECK(field_of({{"schema_version", 1}, {"scenario", {{"dt", "fast"}}}}) == "scenario.dt");
}

TEST_CASE("baseline mode forces rho to zero") {
  const ExperimentConfig cfg = parse_config({{"schema_version", 1}, {"mode", "baseline"},
                                             {"policy", {{"replace_fraction", 0.8}}}});
  CHECK(cfg.policy.replace_fraction == 0.0);
  CHECK(arms_for(cfg).size() == 1);
  CHECK(arms_for(cfg)[0].rho == 0.0);
}

TEST_CASE("config survives a JSON round trip") {
  ExperimentConfig cfg = small_config();
  cfg.mode = Mode::RhoSweep;
  cfg.sweep_rho = {0.0, 0.4};
  cfg.policy.budget = perception::QueryBudget::Reduced;
  cfg.predictor.model = prediction::ForecastModel::ConstantTurn;
  cfg.scenario.explicit_agents.push_back({ObjectClass::Bus, world::MotionModel::ConstantTurn, {1, 2}, {3, 4}, 0.2, 3, 40});
  const json doc = config_to_json(cfg);
  const ExperimentConfig back = parse_config(doc);
  CHECK(config_to_json(back) == doc);
}

TEST_CASE("load_config reports unreadable files as i/o errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
  const fs::path dir = scratch_dir("cfg");
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
}

TEST_CASE("run_experiment writes reports and the comparison") {
  ExperimentConfig cfg = small_config();
  cfg.seeds = {4, 5};
  cfg.output.dir = scratch_dir("experiment");
  cfg.output.dump_debug = true;
  const ExperimentResult res = run_experiment(cfg, 2);
  for (const char* arm : {"baseline", "pap"}) {
    for (std::uint64_t seed : cfg.seeds) {
      const fs::path dir = cfg.output.dir / arm;
      CHECK(fs::exists(dir / ("report_seed" + std::to_string(seed) + ".json")));
      CHECK(fs::exists(dir / ("report_seed" + std::to_string(seed) + ".csv")));
      CHECK(fs::exists(dir / ("dump_seed" + std::to_string(seed) + ".jsonl")));
    }
  }
  CHECK(fs::exists(cfg.output.dir / "comparison.json"));
  CHECK(fs::exists(cfg.output.dir / "comparison.csv"));

  // the written reports read back as the in-memory ones
  const auto back = read_report_dir(cfg.output.dir / "pap");
  REQUIRE(back.size() == 2);
  CHECK(stable_json(back[0].second) == stable_json(res.reports[1][0]));

  // and a replayed dump matches its report file exactly
  const fs::path pap_dir = cfg.output.dir / "pap";
  const auto replayed = replay(read_dump(pap_dir / "dump_seed4.jsonl"));
  CHECK(metrics::report_to_json(replayed).dump(2) + "\n" == read_file(pap_dir / "report_seed4.json"));
}

TEST_CASE("unwritable output is an i/o error") {
  ExperimentConfig cfg = small_config();
  cfg.seeds = {1};
  const fs::path dir = scratch_dir("blocked");
  std::ofstream(dir / "file") << "x";
  cfg.output.dir = dir / "file" / "out";
  CHECK_THROWS_AS(run_experiment(cfg), IoError);
}
