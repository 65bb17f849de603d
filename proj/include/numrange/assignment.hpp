#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace numrange {

/// Minimum-cost perfect matching for a square cost matrix (Hungarian method,
/// O(n³)). Returns row → column.
template <typename Real>
std::vector<Eigen::Index> min_cost_assignment(const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>& cost) {
  using Eigen::Index;
  const Index n = cost.rows();
  const Real inf = std::numeric_limits<Real>::infinity();
  // 1-based potentials; column 0 is a sentinel.
  std::vector<Real> u(std::size_t(n + 1), 0), v(std::size_t(n + 1), 0);
  std::vector<Index> match(std::size_t(n + 1), 0), way(std::size_t(n + 1), 0);
  for (Index row = 1; row <= n; ++row) {
    match[0] = row;
    Index col0 = 0;
    std::vector<Real> minv(std::size_t(n + 1), inf);
    std::vector<char> used(std::size_t(n + 1), 0);
    do {
      used[std::size_t(col0)] = 1;
      const Index r0 = match[std::size_t(col0)];
      Real delta = inf;
      Index col1 = 0;
      for (Index c = 1; c <= n; ++c) {
        if (used[std::size_t(c)]) continue;
        const Real cur = cost(r0 - 1, c - 1) - u[std::size_t(r0)] - v[std::size_t(c)];
        if (cur < minv[std::size_t(c)]) {
          minv[std::size_t(c)] = cur;
          way[std::size_t(c)] = col0;
        }
        if (minv[std::size_t(c)] < delta) {
          delta = minv[std::size_t(c)];
          col1 = c;
        }
      }
      for (Index c = 0; c <= n; ++c) {
        if (used[std::size_t(c)]) {
          u[std::size_t(match[std::size_t(c)])] += delta;
          v[std::size_t(c)] -= delta;
        } else {
          minv[std::size_t(c)] -= delta;
        }
      }
      col0 = col1;
    } while (match[std::size_t(col0)] != 0);
    do {
      const Index col1 = way[std::size_t(col0)];
      match[std::size_t(col0)] = match[std::size_t(col1)];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<Index> row_to_col(std::size_t(n), 0);
  for (Index c = 1; c <= n; ++c) row_to_col[std::size_t(match[std::size_t(c)] - 1)] = c - 1;
  return row_to_col;
}

}  // namespace numrange
