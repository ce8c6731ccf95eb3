#include "pap/perception/assignment.hpp"

#include <algorithm>
#include <limits>

namespace pap::perception {

std::size_t CostMatrix::finite_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(), [](double v) { return v != kForbidden; }));
}

double Assignment::total_cost() const noexcept {
  double sum = 0.0;
  for (const Match& m : matches) sum += m.cost;
  return sum;
}

namespace {

// Hungarian algorithm with potentials on an n x m matrix, n <= m.
// Returns for each row the assigned column.
std::vector<std::size_t> solve_dense(const std::vector<double>& a, std::size_t n, std::size_t m) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<double> minv(m + 1);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

Assignment associate(const CostMatrix& costs) {
  const std::size_t rows = costs.rows();
  const std::size_t cols = costs.cols();

  std::vector<std::size_t> live_rows, live_cols;
  std::vector<char> col_live(cols, 0);
  double max_cost = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    bool any = false;
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = costs.at(r, c);
      if (v == kForbidden) continue;
      any = true;
      col_live[c] = 1;
      max_cost = std::max(max_cost, v);
    }
    if (any) live_rows.push_back(r);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (col_live[c]) live_cols.push_back(c);
  }

  Assignment out;
  if (!live_rows.empty()) {
    // Solve with the smaller side as rows. Forbidden pairs become a penalty
    // larger than any full set of real matches, so the optimum maximises the
    // number of real matches first and their cost second.
    const bool transpose = live_rows.size() > live_cols.size();
    const auto& small = transpose ? live_cols : live_rows;
    const auto& large = transpose ? live_rows : live_cols;
    const std::size_t n = small.size();
    const std::size_t m = large.size();
    const double penalty = (max_cost + 1.0) * static_cast<double>(n + 1);

    std::vector<double> dense(n * m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double v = transpose ? costs.at(large[j], small[i]) : costs.at(small[i], large[j]);
        dense[i * m + j] = v == kForbidden ? penalty : v;
      }
    }
    const auto assigned = solve_dense(dense, n, m);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = transpose ? large[assigned[i]] : small[i];
      const std::size_t c = transpose ? small[i] : large[assigned[i]];
      const double v = costs.at(r, c);
      if (v != kForbidden) out.matches.push_back({r, c, v});
    }
    std::sort(out.matches.begin(), out.matches.end(), [](const Match& a, const Match& b) { return a.row < b.row; });
  }

  std::vector<char> row_used(rows, 0), col_used(cols, 0);
  for (const Match& m : out.matches) {
    row_used[m.row] = 1;
    col_used[m.col] = 1;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (!row_used[r]) out.unmatched_rows.push_back(r);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (!col_used[c]) out.unmatched_cols.push_back(c);
  }
  return out;
}

}  // namespace pap::perception
