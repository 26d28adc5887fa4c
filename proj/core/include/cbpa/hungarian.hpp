// Optimal linear assignment (Jonker-Volgenant style shortest augmenting
// paths, O(n^3)). Rectangular inputs are padded internally; unassigned
// entries come back as -1.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cbpa::assign {

struct Assignment {
  std::vector<int> row_to_col;  // size = rows; -1 if the row is unmatched
  double total_cost = 0.0;      // over matched pairs only
};

// Minimize the summed cost of a one-to-one matching of rows to columns.
Assignment min_cost_assignment(const Eigen::MatrixXd& cost);

// Maximize instead (negated costs under the hood).
Assignment max_weight_assignment(const Eigen::MatrixXd& weight);

}  // namespace cbpa::assign
