#include "pap/harness/sweep.hpp"

#include "pap/common/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace pap::harness {

SweepTable sweep_table(const ExperimentResult& result) {
  SweepTable t;
  t.seeds = result.seeds;
  std::vector<std::size_t> order(result.arms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return result.arms[a].rho < result.arms[b].rho; });

  for (std::size_t a : order) {
    SweepRow row;
    row.rho = result.arms[a].rho;
    const auto& reports = result.reports[a];
    const double n = static_cast<double>(std::max<std::size_t>(reports.size(), 1));
    for (const metrics::TrackingReport& r : reports) {
      row.per_seed.push_back(r.aggregate);
      row.mean.amota += r.aggregate.amota / n;
      row.mean.amotp += r.aggregate.amotp / n;
      row.mean.recall += r.aggregate.recall / n;
      row.mean_ids += static_cast<double>(r.aggregate.ids) / n;
      row.mean_query_refinements += static_cast<double>(r.counters.query_refinements) / n;
      row.mean_cost_evaluations += static_cast<double>(r.counters.cost_evaluations) / n;
      row.mean_wall_seconds += r.counters.wall_seconds / n;
    }
    row.mean.ids = std::llround(row.mean_ids);
    t.rows.push_back(std::move(row));
  }
  return t;
}

SweepTable sweep_rho(const ExperimentConfig& cfg, const std::vector<double>& rho_values, unsigned jobs) {
  std::vector<Arm> arms;
  for (double r : rho_values) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("sweep_rho", "values must lie in [0, 1]");
    arms.push_back({sweep_arm_name(r), r});
  }
  return sweep_table(run_arms(cfg, arms, jobs));
}

std::string sweep_csv(const SweepTable& t) {
  std::string out = "rho,amota,amotp,recall,ids,query_refinements,cost_evaluations,wall_seconds";
  for (std::uint64_t s : t.seeds) out += ",amota_seed" + std::to_string(s);
  out += '\n';
  char buf[256];
  for (const SweepRow& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.rho, r.mean.amota,
                  r.mean.amotp, r.mean.recall, r.mean_ids, r.mean_query_refinements, r.mean_cost_evaluations,
                  r.mean_wall_seconds);
    out += buf;
    for (const metrics::MetricSummary& m : r.per_seed) {
      std::snprintf(buf, sizeof buf, ",%.17g", m.amota);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string sweep_seed_csv(const SweepTable& t) {
  std::string out = "seed,rho,amota,amotp,recall,ids\n";
  char buf[256];
  for (const SweepRow& r : t.rows) {
    for (std::size_t i = 0; i < r.per_seed.size(); ++i) {
      const metrics::MetricSummary& m = r.per_seed[i];
      std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.17g,%lld\n",
                    static_cast<unsigned long long>(t.seeds[i]), r.rho, m.amota, m.amotp, m.recall,
                    static_cast<long long>(m.ids));
      out += buf;
    }
  }
  return out;
}

}  // namespace pap::harness
