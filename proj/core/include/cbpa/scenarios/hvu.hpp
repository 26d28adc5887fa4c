// Asset-protection scenario: patrol/loiter/intercept allocation. Patrol vs
// loiter is the battery-balancing two-option trade; intercept is a
// distance-cost-driven dissensus competition with confidence-weighted
// neighbor influence.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cbpa/graph.hpp"

namespace cbpa::scenarios {

struct HvuConfig {
  double patrol_radius = 50.0;   // m
  double loiter_radius = 15.0;   // m
  double f_intcpt_max = 1.0;
  double j_min = 25.0;           // m, full-input knee
  double j_max = 100.0;          // m, zero-input knee
  double eta1 = 1.0;             // battery-burden input gain
  double eta2 = 1.0;             // intercept cost scale (meters when 1)
  double xi_active = 0.004;      // battery exhaustion per s while patrolling/intercepting
  double xi_loiter = 0.0005;     // battery exhaustion per s while loitering

  // Intercept-competition dynamics (see settle_intercept_allocation).
  double comp_rate = 1.0;          // overall time constant d
  double comp_inhibition = 0.306;  // cross-agent suppression gain
  double comp_half_energy = 0.25;  // evidence-confidence half-energy
  double comp_commit_scale = 0.05; // opinion scale at which commitment saturates
  double comp_t_max = 60.0;        // s, settling horizon
  double comp_dt = 0.02;

  void validate() const;
};

// J_i = eta2 * min_j ||p_i - target_j||. Throws on an empty target list.
double intercept_cost(const Eigen::Vector2d& pos, const std::vector<Eigen::Vector2d>& targets,
                      double eta2 = 1.0);

// Saturated ramp: f_max below j_min, linear down to 0 at j_max, 0 beyond.
double intercept_input(double cost, const HvuConfig& cfg);

struct HvuInputs {
  Eigen::VectorXd f_patrol;
  Eigen::VectorXd f_loiter;
  Eigen::VectorXd f_intercept;
};

// Assembles the three option inputs for the fleet: burden-balancing pair
// from battery levels, intercept ramp from target distances (zero with no
// intruders).
HvuInputs hvu_allocation_step(const std::vector<Eigen::Vector2d>& positions,
                              const Eigen::VectorXd& kappa,
                              const std::vector<Eigen::Vector2d>& intruders,
                              const HvuConfig& cfg);

struct InterceptAllocation {
  Eigen::VectorXd y;            // settled competition opinion per agent
  std::vector<bool> intercepting;  // y_i > 0
  int count = 0;
};

// Integrates the intercept competition
//   y_i' = comp_rate * (-y_i + f_i - g * sum_{k in N(i)} w(f_k) * sigma(y_k))
// where w(f) = f * f^2/(f^2 + h^2) weights a neighbor's suppression by its
// evidence strength (weak evidence is discounted quadratically) and
// sigma(y) = tanh(max(y,0)/eps) gates it on the neighbor actually being
// committed to intercepting. Strongly motivated agents suppress the rest;
// how many survive (k) emerges from the equilibrium rather than being
// chosen up front.
InterceptAllocation settle_intercept_allocation(const Eigen::VectorXd& f_intercept,
                                                const graph::Graph& g, const HvuConfig& cfg);

// k cheapest agents, ties to the lower index. The comparison baseline.
std::vector<int> centralized_intercept_oracle(const Eigen::VectorXd& costs, int k);

}  // namespace cbpa::scenarios
