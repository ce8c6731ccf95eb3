#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace pap::perception {

/// Sentinel for gated-out / forbidden pairs.
inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

/// Dense row-major cost matrix. Entries are >= 0 or kForbidden.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = kForbidden)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double* row(std::size_t r) noexcept { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const noexcept { return data_.data() + r * cols_; }
  bool allowed(std::size_t r, std::size_t c) const { return at(r, c) != kForbidden; }
  std::size_t finite_count() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Match {
  std::size_t row = 0;  // query index
  std::size_t col = 0;  // measurement index
  double cost = 0.0;
  friend bool operator==(const Match&, const Match&) = default;
};

struct Assignment {
  std::vector<Match> matches;               // sorted by row
  std::vector<std::size_t> unmatched_rows;  // ascending
  std::vector<std::size_t> unmatched_cols;  // ascending

  double total_cost() const noexcept;
};

/// Optimal assignment over allowed entries: maximum number of matches, and
/// among those the minimum total cost. Forbidden pairs are never matched.
///
/// Rows and columns without any allowed entry are pruned before the
/// Hungarian (shortest augmenting path) solve; ties resolve toward the
/// lowest column index as rows are inserted in ascending order.
Assignment associate(const CostMatrix& costs);

}  // namespace pap::perception
