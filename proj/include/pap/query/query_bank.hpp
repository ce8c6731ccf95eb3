#pragma once

#include "pap/query/query.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace pap::query {

/// Predicted queries indexed by the frame that produced them.
///
/// Holds at most `capacity` time indices; storing past capacity evicts the
/// smallest index. Single writer; fetch never mutates.
class QueryBank {
 public:
  explicit QueryBank(std::size_t capacity = 4);

  /// Replaces entries[t]. Throws pap::ContractViolation if any query is not
  /// Predicted (the bank is left unchanged in that case).
  void store(std::int64_t t, std::vector<Query> queries);

  /// Stored list for t, or an empty list.
  const std::vector<Query>& fetch(std::int64_t t) const;

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::vector<std::int64_t> time_indices() const;

 private:
  std::size_t capacity_;
  std::map<std::int64_t, std::vector<Query>> entries_;
};

}  // namespace pap::query
