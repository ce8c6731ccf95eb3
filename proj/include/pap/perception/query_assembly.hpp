#pragma once

#include "pap/common/rng.hpp"
#include "pap/query/query.hpp"
#include "pap/query/query_bank.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace pap::perception {

/// fixed: every frame uses `total_queries` slots.
/// reduced: when predicted queries are in play (replace_fraction > 0), the
/// frame uses total_queries - |bank(T-1)| slots (at least one).
enum class QueryBudget : std::uint8_t { Fixed, Reduced };

std::string_view to_string(QueryBudget b) noexcept;
QueryBudget budget_from_string(std::string_view name);

struct QueryAssemblyPolicy {
  std::size_t total_queries = 200;
  double replace_fraction = 0.8;
  QueryBudget budget = QueryBudget::Fixed;

  void validate() const;
};

/// Slot count for a frame whose predecessor left `bank_size` predicted queries.
std::size_t query_slots(const QueryAssemblyPolicy& policy, std::size_t bank_size) noexcept;

/// Predicted-query share: min(available, floor(replace_fraction * slots)).
std::size_t predicted_slots(const QueryAssemblyPolicy& policy, std::size_t slots, std::size_t available) noexcept;

/// Random query: center uniform in [-h, h]^2, tail of standard normals.
query::Query make_random_query(const query::AffineCodec& codec, double world_half_extent, std::int64_t frame, Rng& rng);

/// Query set for frame t: the k highest-confidence predicted queries from
/// bank(t-1) (ties by source track id, then horizon step), followed by
/// fresh random queries up to the frame's slot count. At t = 0, or with an
/// empty bank, every slot is random.
std::vector<query::Query> assemble_queries(const query::QueryBank& bank, std::int64_t t,
                                           const QueryAssemblyPolicy& policy, const query::AffineCodec& codec,
                                           double world_half_extent, Rng& rng);

}  // namespace pap::perception
