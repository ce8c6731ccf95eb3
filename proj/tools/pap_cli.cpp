// pap: command-line front end for scenario generation, experiment runs,
// A/B comparison, rho sweeps and debug-dump replay.

#include "pap/common/errors.hpp"
#include "pap/harness/compare.hpp"
#include "pap/harness/config.hpp"
#include "pap/harness/debug_dump.hpp"
#include "pap/harness/runner.hpp"
#include "pap/harness/sweep.hpp"
#include "pap/world/scenario_io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace pap;
using namespace pap::harness;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool dump_debug = false;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Common& c, bool need_config) {
  auto* opt = cmd->add_option("--config", c.config, "experiment config (JSON)");
  if (need_config) opt->required();
  cmd->add_option("--seed", c.seed, "run a single seed instead of the configured list");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_flag("--dump-debug", c.dump_debug, "write per-frame JSON-lines traces");
  cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) cfg.seeds = {*c.seed};
  if (!c.out.empty()) cfg.output.dir = c.out;
  if (c.dump_debug) cfg.output.dump_debug = true;
  cfg.validate();
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void print_summary(const ComparisonSummary& s) {
  for (const MetricComparison& m : s.metrics) {
    std::printf("%-8s baseline %.4f +- %.4f   pap %.4f +- %.4f   delta %+.4f", m.metric.c_str(), m.baseline_mean,
                m.baseline_std, m.pap_mean, m.pap_std, m.absolute_delta);
    if (m.relative_delta) std::printf(" (%+.1f%%)", 100.0 * *m.relative_delta);
    std::printf("\n");
  }
  const SignTest& t = s.amota_sign_test;
  std::printf("amota sign test: %d wins, %d losses, %d ties, p = %.4g\n", t.wins, t.losses, t.ties, t.p_value);
}

int cmd_generate(const Common& c) {
  ExperimentConfig cfg = load(c);
  const std::filesystem::path dir = c.out.empty() ? cfg.output.dir : std::filesystem::path(c.out);
  for (std::uint64_t seed : cfg.seeds) {
    const world::Scenario s = world::generate_scenario(cfg.scenario, seed);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto path = dir / ("scenario_seed" + std::to_string(seed) + ".json");
    world::save_scenario(s, path);
    std::printf("%s: %zu agents, %lld frames\n", path.string().c_str(), s.agents.size(),
                static_cast<long long>(s.frame_count));
  }
  return kExitOk;
}

int cmd_run(const Common& c) {
  const ExperimentConfig cfg = load(c);
  const ExperimentResult res = run_experiment(cfg, c.jobs);
  for (std::size_t a = 0; a < res.arms.size(); ++a) {
    for (std::size_t s = 0; s < res.seeds.size(); ++s) {
      const metrics::TrackingReport& r = res.reports[a][s];
      std::printf("%-10s seed %-6llu amota %.4f amotp %.4f recall %.4f ids %lld fps %.1f\n",
                  res.arms[a].name.c_str(), static_cast<unsigned long long>(res.seeds[s]), r.aggregate.amota,
                  r.aggregate.amotp, r.aggregate.recall, static_cast<long long>(r.aggregate.ids), r.counters.fps);
    }
  }
  if (cfg.mode == Mode::AbCompare) {
    print_summary(compare(paired(res.seeds, res.reports[0]), paired(res.seeds, res.reports[1])));
  }
  std::printf("reports written to %s\n", cfg.output.dir.string().c_str());
  return kExitOk;
}

int cmd_compare(const std::string& baseline_dir, const std::string& pap_dir, const std::string& out) {
  const SeedReports baseline = read_report_dir(baseline_dir);
  const SeedReports pap = read_report_dir(pap_dir);
  if (baseline.empty()) throw IoError("no reports in '" + baseline_dir + "'");
  const ComparisonSummary s = compare(baseline, pap);
  print_summary(s);
  if (!out.empty()) {
    write_file(std::filesystem::path(out) / "comparison.json", comparison_to_json(s).dump(2) + "\n");
    write_file(std::filesystem::path(out) / "comparison.csv", comparison_csv(s));
  }
  return kExitOk;
}

int cmd_sweep(const Common& c, const std::vector<double>& rho) {
  ExperimentConfig cfg = load(c);
  if (!rho.empty()) cfg.sweep_rho = rho;
  if (cfg.sweep_rho.empty()) throw ConfigError("sweep_rho", "no rho values given");
  const SweepTable t = sweep_rho(cfg, cfg.sweep_rho, c.jobs);
  const std::string csv = sweep_csv(t);
  write_file(cfg.output.dir / "sweep.csv", csv);
  write_file(cfg.output.dir / "sweep_seeds.csv", sweep_seed_csv(t));
  for (const SweepRow& r : t.rows) {
    std::printf("rho %.3f  amota %.4f amotp %.4f recall %.4f ids %.1f refinements %.0f\n", r.rho, r.mean.amota,
                r.mean.amotp, r.mean.recall, r.mean_ids, r.mean_query_refinements);
  }
  return kExitOk;
}

int cmd_replay(const std::string& dump, const std::string& out) {
  const metrics::TrackingReport r = replay(read_dump(std::filesystem::path(dump)));
  const std::string json = metrics::report_to_json(r).dump(2) + "\n";
  if (out.empty()) {
    std::cout << json;
  } else {
    write_file(std::filesystem::path(out) / "replay_report.json", json);
    write_file(std::filesystem::path(out) / "replay_report.csv", metrics::report_csv(r));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prediction-as-perception tracking harness"};
  app.require_subcommand(1);

  Common gen_opts, run_opts, sweep_opts;
  auto* gen = app.add_subcommand("generate", "generate scenario files");
  add_common(gen, gen_opts, false);

  auto* run = app.add_subcommand("run", "run the configured experiment");
  add_common(run, run_opts, true);

  std::string baseline_dir, pap_dir, compare_out;
  auto* cmp = app.add_subcommand("compare", "compare two report directories");
  cmp->add_option("baseline", baseline_dir, "baseline report directory")->required();
  cmp->add_option("pap", pap_dir, "pap report directory")->required();
  cmp->add_option("--out", compare_out, "write comparison.json and comparison.csv here");

  std::vector<double> rho;
  auto* sweep = app.add_subcommand("sweep", "sweep the replacement fraction");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--rho", rho, "rho values (overrides sweep_rho)")->check(CLI::Range(0.0, 1.0));

  std::string dump_path, replay_out;
  auto* rep = app.add_subcommand("replay", "rebuild a report from a debug dump");
  rep->add_option("dump", dump_path, "dump file (.jsonl)")->required();
  rep->add_option("--out", replay_out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*gen) return cmd_generate(gen_opts);
    if (*run) return cmd_run(run_opts);
    if (*cmp) return cmd_compare(baseline_dir, pap_dir, compare_out);
    if (*sweep) return cmd_sweep(sweep_opts, rho);
    if (*rep) return cmd_replay(dump_path, replay_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
