#include "pap/harness/runner.hpp"

#include "pap/common/errors.hpp"
#include "pap/harness/compare.hpp"
#include "pap/harness/sweep.hpp"
#include "pap/perception/tracker.hpp"
#include "pap/prediction/forecast.hpp"
#include "pap/query/query_bank.hpp"
#include "pap/world/scenario_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

namespace pap::harness {

namespace {

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

TrackRecord record_of(const perception::Track& t) {
  const perception::TrackState& s = t.current();
  return {t.track_id, t.object_class, t.status, s.center, s.velocity, t.hits, t.misses, s.coasted};
}

QueryRecord record_of(const query::Query& q, const query::AffineCodec& codec) {
  return {q.provenance, q.source_track_id, q.horizon_step, q.object_class, codec.decode_reference(q).center,
          q.confidence};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

}  // namespace

world::Scenario scenario_for(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.scenario_path) return world::load_scenario(*cfg.scenario_path);
  return world::generate_scenario(cfg.scenario, seed);
}

RunResult run_single(const ExperimentConfig& cfg, const world::Scenario& scenario, std::uint64_t seed, const Arm& arm,
                     bool record_trace) {
  using clock = std::chrono::steady_clock;

  const perception::PerceptionParams params = cfg.perception_params(scenario.dt);
  const prediction::PredictorConfig predictor = cfg.predictor_config(scenario.dt);
  const query::AffineCodec codec = query::AffineCodec::for_world(cfg.perception.embedding_dim, params.world_half_extent);
  perception::QueryAssemblyPolicy policy = cfg.policy;
  policy.replace_fraction = arm.rho;

  query::QueryBank bank(cfg.perception.bank_capacity);
  perception::TrackSet tracks;
  metrics::RunLog log;
  metrics::Counters counters;
  std::uint64_t hash = fnv1a64("");
  clock::duration elapsed{};

  RunResult result;
  result.seed = seed;
  result.arm = arm;
  RunTrace trace;

  for (std::int64_t t = 0; t < scenario.frame_count; ++t) {
    Rng sensor_rng = Rng::stream(seed, "sensor", static_cast<std::uint64_t>(t));
    const std::vector<world::Measurement> measurements = world::sense(scenario, t, cfg.sensor, sensor_rng);
    Rng query_rng = Rng::stream(seed, "queries", static_cast<std::uint64_t>(t));

    const auto start = clock::now();
    perception::PerceptionOutput out =
        perception::perceive(t, measurements, bank, std::move(tracks), policy, params, codec, query_rng);
    std::vector<prediction::Forecast> forecasts = prediction::predict_and_store(out.tracks, bank, t, predictor, codec);
    elapsed += clock::now() - start;

    tracks = out.tracks;
    counters.query_refinements += out.queries.size();
    counters.cost_evaluations += out.cost_evaluations;
    counters.gated_pairs += out.gated_pairs;
    result.frame_cost_evaluations.push_back(out.cost_evaluations);
    hash = world::hash_measurements(measurements, hash);

    std::vector<world::GroundTruthObject> gt = world::ground_truth(scenario, t, cfg.sensor.detection_range);
    if (record_trace) {
      FrameTrace f;
      f.frame = t;
      for (const query::Query& q : out.queries) f.queries.push_back(record_of(q, codec));
      f.assignment = out.assignment;
      for (const perception::Track& tr : out.tracks.tracks) f.tracks.push_back(record_of(tr));
      f.forecasts = std::move(forecasts);
      f.measurements = measurements;
      f.detections = out.detections;
      f.ground_truth = gt;
      trace.frames.push_back(std::move(f));
    }
    log.frames.push_back({std::move(gt), std::move(out.detections)});
  }

  counters.frames = scenario.frame_count;
  counters.wall_seconds = std::chrono::duration<double>(elapsed).count();

  // where reports go is not part of what produced them
  nlohmann::json echo = config_to_json(cfg);
  echo.erase("output");
  echo["run"] = {{"seed", seed}, {"arm", arm.name}, {"rho", arm.rho}, {"scenario_id", scenario.scenario_id}};

  result.report = metrics::build_report(log, counters, cfg.metrics, echo, hex(hash));
  if (record_trace) {
    trace.gate_threshold = params.gate_threshold;
    trace.metric_params = cfg.metrics;
    trace.counters = result.report.counters;
    trace.measurement_hash = result.report.measurement_hash;
    trace.config_echo = echo;
    result.trace = std::move(trace);
  }
  return result;
}

RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed, const Arm& arm, bool record_trace) {
  return run_single(cfg, scenario_for(cfg, seed), seed, arm, record_trace);
}

std::string sweep_arm_name(double rho) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rho_%.3f", rho);
  return buf;
}

std::vector<Arm> arms_for(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case Mode::Baseline:
      return {{"baseline", 0.0}};
    case Mode::Pap:
      return {{"pap", cfg.policy.replace_fraction}};
    case Mode::AbCompare:
      return {{"baseline", 0.0}, {"pap", cfg.policy.replace_fraction}};
    case Mode::RhoSweep: {
      std::vector<double> rhos = cfg.sweep_rho;
      std::sort(rhos.begin(), rhos.end());
      rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());
      std::vector<Arm> arms;
      for (double r : rhos) arms.push_back({sweep_arm_name(r), r});
      return arms;
    }
  }
  return {};
}

ExperimentResult run_arms(const ExperimentConfig& cfg, const std::vector<Arm>& arms, unsigned jobs) {
  ExperimentResult res;
  res.arms = arms;
  res.seeds = cfg.seeds;
  res.reports.assign(arms.size(), std::vector<metrics::TrackingReport>(cfg.seeds.size()));

  // scenarios are shared by every arm of a seed
  std::vector<world::Scenario> scenarios(cfg.seeds.size());
  const bool dump = cfg.output.dump_debug;
  std::vector<std::vector<std::optional<RunTrace>>> traces;

  const std::size_t total = arms.size() * cfg.seeds.size();
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&](bool scenario_phase) {
    const std::size_t n = scenario_phase ? cfg.seeds.size() : total;
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        if (scenario_phase) {
          scenarios[i] = scenario_for(cfg, cfg.seeds[i]);
          continue;
        }
        const std::size_t a = i / cfg.seeds.size();
        const std::size_t s = i % cfg.seeds.size();
        RunResult r = run_single(cfg, scenarios[s], cfg.seeds[s], arms[a], dump);
        res.reports[a][s] = std::move(r.report);
        if (dump) traces[a][s] = std::move(r.trace);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  auto run_phase = [&](bool scenario_phase) {
    next = 0;
    const unsigned n = std::max(1u, jobs);
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(work, scenario_phase);
    work(scenario_phase);
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  };

  if (dump) traces.assign(arms.size(), std::vector<std::optional<RunTrace>>(cfg.seeds.size()));
  run_phase(true);
  run_phase(false);

  if (dump) {
    for (std::size_t a = 0; a < arms.size(); ++a) {
      const std::filesystem::path dir = cfg.output.dir / arms[a].name;
      ensure_dir(dir);
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        write_dump(*traces[a][s], dir / ("dump_seed" + std::to_string(cfg.seeds[s]) + ".jsonl"));
      }
    }
  }
  return res;
}

void write_report(const metrics::TrackingReport& report, const std::filesystem::path& dir, std::uint64_t seed) {
  ensure_dir(dir);
  const std::string stem = "report_seed" + std::to_string(seed);
  write_text(dir / (stem + ".json"), metrics::report_to_json(report).dump(2) + "\n");
  write_text(dir / (stem + ".csv"), metrics::report_csv(report));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs) {
  cfg.validate();
  ensure_dir(cfg.output.dir);
  ExperimentResult res = run_arms(cfg, arms_for(cfg), jobs);
  for (std::size_t a = 0; a < res.arms.size(); ++a) {
    for (std::size_t s = 0; s < res.seeds.size(); ++s) {
      write_report(res.reports[a][s], cfg.output.dir / res.arms[a].name, res.seeds[s]);
    }
  }
  if (cfg.mode == Mode::AbCompare) {
    const ComparisonSummary summary = compare(paired(res.seeds, res.reports[0]), paired(res.seeds, res.reports[1]));
    write_text(cfg.output.dir / "comparison.json", comparison_to_json(summary).dump(2) + "\n");
    write_text(cfg.output.dir / "comparison.csv", comparison_csv(summary));
  } else if (cfg.mode == Mode::RhoSweep) {
    const SweepTable table = sweep_table(res);
    write_text(cfg.output.dir / "sweep.csv", sweep_csv(table));
    write_text(cfg.output.dir / "sweep_seeds.csv", sweep_seed_csv(table));
  }
  return res;
}

std::vector<std::pair<std::uint64_t, metrics::TrackingReport>> read_report_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("report directory '" + dir.string() + "' not found");
  static const std::regex name(R"(report_seed(\d+)\.json)");
  std::vector<std::pair<std::uint64_t, metrics::TrackingReport>> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::smatch m;
    const std::string file = entry.path().filename().string();
    if (!std::regex_match(file, m, name)) continue;
    std::ifstream in(entry.path());
    if (!in) throw IoError("cannot open '" + entry.path().string() + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(file, e.what());
    }
    out.emplace_back(std::stoull(m[1].str()), metrics::report_from_json(doc));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace pap::harness
