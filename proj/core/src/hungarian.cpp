#include "cbpa/hungarian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbpa::assign {

namespace {

// Square-matrix JV algorithm with dual potentials. 1-based internal arrays,
// following the classic formulation.
std::vector<int> solve_square(const Eigen::MatrixXd& a, int n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<size_t>(n) + 1, 0), way(static_cast<size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<size_t>(n) + 1, 0);
    do {
      used[static_cast<size_t>(j0)] = 1;
      int i0 = p[static_cast<size_t>(j0)], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        double cur = a(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
        if (cur < minv[static_cast<size_t>(j)]) {
          minv[static_cast<size_t>(j)] = cur;
          way[static_cast<size_t>(j)] = j0;
        }
        if (minv[static_cast<size_t>(j)] < delta) {
          delta = minv[static_cast<size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) {
          u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
          v[static_cast<size_t>(j)] -= delta;
        } else {
          minv[static_cast<size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<size_t>(j0)];
      p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(static_cast<size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<size_t>(j)] != 0) row_to_col[static_cast<size_t>(p[static_cast<size_t>(j)]) - 1] = j - 1;
  return row_to_col;
}

}  // namespace

Assignment min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  if (rows == 0 || cols == 0) return {};
  for (Eigen::Index i = 0; i < cost.size(); ++i)
    if (!std::isfinite(cost.data()[i]))
      throw std::invalid_argument("assignment costs must be finite");

  // Pad to square with zero-cost dummies; dummy matches are dropped below.
  const int n = std::max(rows, cols);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a.topLeftCorner(rows, cols) = cost;

  auto row_to_col = solve_square(a, n);
  Assignment out;
  out.row_to_col.assign(static_cast<size_t>(rows), -1);
  for (int i = 0; i < rows; ++i) {
    int j = row_to_col[static_cast<size_t>(i)];
    if (j >= 0 && j < cols) {
      out.row_to_col[static_cast<size_t>(i)] = j;
      out.total_cost += cost(i, j);
    }
  }
  return out;
}

Assignment max_weight_assignment(const Eigen::MatrixXd& weight) {
  Assignment out = min_cost_assignment(-weight);
  out.total_cost = -out.total_cost;
  return out;
}

}  // namespace cbpa::assign
