#include "pap/perception/query_assembly.hpp"

#include "pap/common/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pap::perception {

std::string_view to_string(QueryBudget b) noexcept { return b == QueryBudget::Reduced ? "reduced" : "fixed"; }

QueryBudget budget_from_string(std::string_view name) {
  if (name == "fixed") return QueryBudget::Fixed;
  if (name == "reduced") return QueryBudget::Reduced;
  throw ConfigError("policy.budget", "expected 'fixed' or 'reduced', got '" + std::string(name) + "'");
}

void QueryAssemblyPolicy::validate() const {
  if (total_queries < 1) throw ConfigError("policy.total_queries", "must be >= 1");
  if (!(replace_fraction >= 0.0 && replace_fraction <= 1.0)) {
    throw ConfigError("policy.replace_fraction", "must be in [0,1]");
  }
}

std::size_t query_slots(const QueryAssemblyPolicy& policy, std::size_t bank_size) noexcept {
  if (policy.budget == QueryBudget::Fixed || policy.replace_fraction <= 0.0) return policy.total_queries;
  return bank_size >= policy.total_queries ? 1 : policy.total_queries - bank_size;
}

std::size_t predicted_slots(const QueryAssemblyPolicy& policy, std::size_t slots, std::size_t available) noexcept {
  // the epsilon keeps e.g. 0.29 * 100 from flooring to 28
  const auto share = static_cast<std::size_t>(std::floor(policy.replace_fraction * static_cast<double>(slots) + 1e-9));
  return std::min(available, std::min(share, slots));
}

query::Query make_random_query(const query::AffineCodec& codec, double world_half_extent, std::int64_t frame, Rng& rng) {
  const Vec2 center{rng.uniform(-world_half_extent, world_half_extent), rng.uniform(-world_half_extent, world_half_extent)};
  std::vector<double> tail(codec.tail_dim());
  for (double& v : tail) v = rng.normal();
  query::Query q = codec.embed_center({center}, tail);
  q.created_frame = frame;
  return q;
}

std::vector<query::Query> assemble_queries(const query::QueryBank& bank, std::int64_t t,
                                           const QueryAssemblyPolicy& policy, const query::AffineCodec& codec,
                                           double world_half_extent, Rng& rng) {
  policy.validate();
  static const std::vector<query::Query> kNone;
  const std::vector<query::Query>& previous = t > 0 ? bank.fetch(t - 1) : kNone;

  const std::size_t slots = query_slots(policy, previous.size());
  const std::size_t k = predicted_slots(policy, slots, previous.size());

  std::vector<const query::Query*> ranked;
  ranked.reserve(previous.size());
  for (const query::Query& q : previous) ranked.push_back(&q);
  std::stable_sort(ranked.begin(), ranked.end(), [](const query::Query* a, const query::Query* b) {
    if (a->confidence != b->confidence) return a->confidence > b->confidence;
    if (*a->source_track_id != *b->source_track_id) return *a->source_track_id < *b->source_track_id;
    return a->horizon_step < b->horizon_step;
  });

  std::vector<query::Query> out;
  out.reserve(slots);
  for (std::size_t i = 0; i < k; ++i) {
    query::check_query(*ranked[i], codec.dim());
    out.push_back(*ranked[i]);
  }
  while (out.size() < slots) out.push_back(make_random_query(codec, world_half_extent, t, rng));
  return out;
}

}  // namespace pap::perception
