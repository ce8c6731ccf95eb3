#include "pap/query/query_bank.hpp"

#include "pap/common/errors.hpp"

#include <string>

namespace pap::query {

QueryBank::QueryBank(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("perception.bank_capacity", "must be >= 1");
}

void QueryBank::store(std::int64_t t, std::vector<Query> queries) {
  for (const Query& q : queries) {
    if (!q.is_predicted()) {
      throw ContractViolation("bank_store: random-provenance query offered at T=" + std::to_string(t));
    }
    if (!q.source_track_id) throw ContractViolation("bank_store: predicted query without source track");
  }
  entries_[t] = std::move(queries);
  while (entries_.size() > capacity_) entries_.erase(entries_.begin());
}

const std::vector<Query>& QueryBank::fetch(std::int64_t t) const {
  static const std::vector<Query> kEmpty;
  auto it = entries_.find(t);
  return it == entries_.end() ? kEmpty : it->second;
}

std::vector<std::int64_t> QueryBank::time_indices() const {
  std::vector<std::int64_t> out;
  out.reserve(entries_.size());
  for (const auto& [t, _] : entries_) out.push_back(t);
  return out;
}

}  // namespace pap::query
