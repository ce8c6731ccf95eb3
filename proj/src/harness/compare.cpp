#include "pap/harness/compare.hpp"

#include "pap/common/errors.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace pap::harness {

namespace {

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

template <typename F>
std::vector<double> column(const SeedReports& r, F f) {
  std::vector<double> out;
  out.reserve(r.size());
  for (const auto& [seed, report] : r) out.push_back(f(report));
  return out;
}

nlohmann::json metric_json(const MetricComparison& m) {
  return {{"metric", m.metric},
          {"baseline_mean", m.baseline_mean},
          {"baseline_std", m.baseline_std},
          {"pap_mean", m.pap_mean},
          {"pap_std", m.pap_std},
          {"absolute_delta", m.absolute_delta},
          {"relative_delta", m.relative_delta ? nlohmann::json(*m.relative_delta) : nlohmann::json(nullptr)}};
}

nlohmann::json summary_json(const metrics::MetricSummary& m) {
  return {{"amota", m.amota}, {"amotp", m.amotp}, {"recall", m.recall}, {"ids", m.ids}};
}

const MetricComparison& find(const std::vector<MetricComparison>& v, std::string_view name) {
  for (const MetricComparison& m : v) {
    if (m.metric == name) return m;
  }
  throw ContractViolation("no comparison for '" + std::string(name) + "'");
}

}  // namespace

SeedReports paired(const std::vector<std::uint64_t>& seeds, const std::vector<metrics::TrackingReport>& reports) {
  if (seeds.size() != reports.size()) throw ContractViolation("paired: seed and report counts differ");
  SeedReports out;
  for (std::size_t i = 0; i < seeds.size(); ++i) out.emplace_back(seeds[i], reports[i]);
  return out;
}

std::optional<double> relative_delta(double baseline, double pap) {
  if (baseline == 0.0) return std::nullopt;
  return (pap - baseline) / std::abs(baseline);
}

MetricComparison compare_values(std::string metric, const std::vector<double>& baseline,
                                const std::vector<double>& pap) {
  MetricComparison m;
  m.metric = std::move(metric);
  m.baseline_mean = mean(baseline);
  m.baseline_std = sample_std(baseline);
  m.pap_mean = mean(pap);
  m.pap_std = sample_std(pap);
  m.absolute_delta = m.pap_mean - m.baseline_mean;
  m.relative_delta = relative_delta(m.baseline_mean, m.pap_mean);
  return m;
}

SignTest sign_test(const std::vector<double>& baseline, const std::vector<double>& pap, bool higher_is_better) {
  if (baseline.size() != pap.size()) throw ContractViolation("sign_test: unpaired samples");
  SignTest t;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    const double d = higher_is_better ? pap[i] - baseline[i] : baseline[i] - pap[i];
    if (d > 0.0) {
      ++t.wins;
    } else if (d < 0.0) {
      ++t.losses;
    } else {
      ++t.ties;
    }
  }
  const int n = t.wins + t.losses;
  // P(X >= wins), summing binomial terms in log space
  double p = 0.0;
  for (int k = t.wins; k <= n; ++k) {
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0);
    p += std::exp(log_term);
  }
  t.p_value = n == 0 ? 1.0 : std::min(1.0, p);
  return t;
}

const MetricComparison& ComparisonSummary::metric(std::string_view name) const { return find(metrics, name); }
const MetricComparison& ComparisonSummary::counter(std::string_view name) const { return find(counters, name); }

ComparisonSummary compare(const SeedReports& baseline, const SeedReports& pap) {
  std::set<std::uint64_t> bs;
  std::set<std::uint64_t> ps;
  for (const auto& p : baseline) bs.insert(p.first);
  for (const auto& p : pap) ps.insert(p.first);
  if (bs != ps || bs.size() != baseline.size() || ps.size() != pap.size()) {
    throw ContractViolation("compare: baseline and pap arms cover different seeds");
  }
  // align pap to baseline order
  SeedReports aligned;
  for (const auto& [seed, report] : baseline) {
    for (const auto& p : pap) {
      if (p.first == seed) aligned.push_back(p);
    }
  }

  ComparisonSummary s;
  using metrics::TrackingReport;
  auto metric = [&](const char* name, auto f) {
    s.metrics.push_back(compare_values(name, column(baseline, f), column(aligned, f)));
  };
  auto counter = [&](const char* name, auto f) {
    s.counters.push_back(compare_values(name, column(baseline, f), column(aligned, f)));
  };
  metric("amota", [](const TrackingReport& r) { return r.aggregate.amota; });
  metric("amotp", [](const TrackingReport& r) { return r.aggregate.amotp; });
  metric("recall", [](const TrackingReport& r) { return r.aggregate.recall; });
  metric("ids", [](const TrackingReport& r) { return static_cast<double>(r.aggregate.ids); });
  counter("wall_seconds", [](const TrackingReport& r) { return r.counters.wall_seconds; });
  counter("fps", [](const TrackingReport& r) { return r.counters.fps; });
  counter("query_refinements", [](const TrackingReport& r) { return static_cast<double>(r.counters.query_refinements); });
  counter("cost_evaluations", [](const TrackingReport& r) { return static_cast<double>(r.counters.cost_evaluations); });
  counter("gated_pairs", [](const TrackingReport& r) { return static_cast<double>(r.counters.gated_pairs); });

  for (std::size_t i = 0; i < baseline.size(); ++i) {
    const TrackingReport& b = baseline[i].second;
    const TrackingReport& p = aligned[i].second;
    s.seeds.push_back({baseline[i].first, b.aggregate, p.aggregate, b.counters, p.counters,
                       b.measurement_hash == p.measurement_hash});
  }
  s.amota_sign_test = sign_test(column(baseline, [](const TrackingReport& r) { return r.aggregate.amota; }),
                                column(aligned, [](const TrackingReport& r) { return r.aggregate.amota; }));
  return s;
}

nlohmann::json comparison_to_json(const ComparisonSummary& s) {
  nlohmann::json metrics = nlohmann::json::array();
  for (const MetricComparison& m : s.metrics) metrics.push_back(metric_json(m));
  nlohmann::json counters = nlohmann::json::array();
  for (const MetricComparison& m : s.counters) counters.push_back(metric_json(m));
  nlohmann::json seeds = nlohmann::json::array();
  for (const SeedPair& p : s.seeds) {
    seeds.push_back({{"seed", p.seed},
                     {"baseline", summary_json(p.baseline)},
                     {"pap", summary_json(p.pap)},
                     {"baseline_wall_seconds", p.baseline_counters.wall_seconds},
                     {"pap_wall_seconds", p.pap_counters.wall_seconds},
                     {"baseline_cost_evaluations", p.baseline_counters.cost_evaluations},
                     {"pap_cost_evaluations", p.pap_counters.cost_evaluations},
                     {"same_measurements", p.same_measurements}});
  }
  const SignTest& t = s.amota_sign_test;
  return {{"metrics", std::move(metrics)},
          {"counters", std::move(counters)},
          {"seeds", std::move(seeds)},
          {"amota_sign_test", {{"wins", t.wins}, {"losses", t.losses}, {"ties", t.ties}, {"p_value", t.p_value}}}};
}

std::string comparison_csv(const ComparisonSummary& s) {
  std::string out = "kind,name,baseline_mean,baseline_std,pap_mean,pap_std,absolute_delta,relative_delta\n";
  auto row = [&out](const char* kind, const MetricComparison& m) {
    char buf[320];
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,", kind, m.metric.c_str(), m.baseline_mean,
                  m.baseline_std, m.pap_mean, m.pap_std, m.absolute_delta);
    out += buf;
    if (m.relative_delta) {
      std::snprintf(buf, sizeof buf, "%.17g", *m.relative_delta);
      out += buf;
    }
    out += '\n';
  };
  for (const MetricComparison& m : s.metrics) row("metric", m);
  for (const MetricComparison& m : s.counters) row("counter", m);
  return out;
}

}  // namespace pap::harness
