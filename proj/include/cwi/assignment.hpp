#pragma once

#include <limits>
#include <vector>

#include "cwi/common.hpp"

namespace cwi {

/// Exact min-cost perfect matching on a dense n x n cost matrix (row-major),
/// Jonker-Volgenant-style shortest augmenting paths with dual potentials.
/// Fills rowsol[r] = assigned column. O(n^3).
inline double solve_assignment(const std::vector<double>& cost, int n, std::vector<int>& rowsol) {
  if (n < 1 || cost.size() != static_cast<std::size_t>(n) * n)
    throw input_error("solve_assignment: bad cost matrix");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);  // p[j] = row matched to column j (1-based)
  std::vector<char> used(n + 1);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      const double* row = cost.data() + static_cast<std::size_t>(i0 - 1) * n;
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
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
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  rowsol.assign(n, -1);
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    rowsol[p[j] - 1] = j - 1;
    total += cost[static_cast<std::size_t>(p[j] - 1) * n + (j - 1)];
  }
  return total;
}

}  // namespace cwi
