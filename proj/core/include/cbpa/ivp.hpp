// Discrete multi-objective behavior optimization: weighted utilities over a
// uniformly discretized decision domain, option-gated behavior activation,
// and the exhaustive argmax used both in production and as its own oracle.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cbpa::ivp {

struct DecisionVariable {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  double step = 1.0;
};

class DecisionDomain {
public:
  DecisionDomain() = default;
  explicit DecisionDomain(std::vector<DecisionVariable> vars,
                          std::uint64_t grid_cap = 1'000'000);

  const std::vector<DecisionVariable>& variables() const { return vars_; }
  int n_variables() const { return static_cast<int>(vars_.size()); }
  // Points along variable m.
  int size(int m) const { return sizes_[static_cast<size_t>(m)]; }
  std::uint64_t grid_size() const { return total_; }
  // Value of variable m at grid index idx.
  double value(int m, int idx) const;
  // Decode a flat grid index (row-major, first variable slowest).
  std::vector<double> point(std::uint64_t flat) const;

private:
  std::vector<DecisionVariable> vars_;
  std::vector<int> sizes_;
  std::uint64_t total_ = 1;
};

using Objective = std::function<double(const std::vector<double>&)>;

struct Behavior {
  std::string name;
  Objective objective;
  double weight = 1.0;
};

// 0/1 map from options (rows) to behaviors (columns).
struct OptionBehaviorMap {
  Eigen::MatrixXd a_c;

  void validate() const;
  // Indices of options whose behavior row is all zero (legal; the vehicle
  // would idle there).
  std::vector<int> empty_option_rows() const;
};

// Behaviors gated on by the strongest opinion: {q : A_c[argmax z_i][q] = 1}.
std::vector<int> active_behaviors(const Eigen::VectorXd& z_i, const OptionBehaviorMap& map,
                                  const std::vector<Behavior>& behaviors);

// Argmax of sum_q w_q f_q over the grid, ties broken to the lowest flat grid
// index. Throws on an empty active set or a domain over the grid cap.
std::vector<double> solve(const DecisionDomain& domain, const std::vector<Behavior>& active);

// Independent exhaustive oracle; must agree with solve exactly.
std::vector<double> brute_force_solve(const DecisionDomain& domain,
                                      const std::vector<Behavior>& active);

// Circular helpers for heading-valued variables (degrees).
double wrap_degrees(double deg);                   // into [0, 360)
double circular_distance_deg(double a, double b);  // shortest separation, [0, 180]

}  // namespace cbpa::ivp
