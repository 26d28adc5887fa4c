// Second-order distributed optimization of partially observed costs:
// observed-gradient plus unobserved-Hessian flow, mean-field masking, the
// equal-cost-burden construction, and the consensus/gradient reductions used
// as oracles in tests.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "cbpa/graph.hpp"

namespace cbpa::census {

// A cost split into a locally observable gradient and the Hessian of the
// unobserved remainder. grad_obs(z)[i] must depend on z[i] only.
struct DecomposedCost {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_obs;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian_unobs;
  double eta = 1.0;
};

enum class BurdenMode { consensus, dissensus };

// Battery-exhaustion burden model. kappa maps an agent's opinion to its
// exhaustion fraction; dkappa_dz is the marginal cost of the costly option. For
// the homogeneous analysis all agents share the same marginal.
struct BurdenModel {
  std::function<double(double z_i, double t)> kappa;
  double dkappa_dz = 1.0;
  BurdenMode mode = BurdenMode::consensus;
};

// -eta * (H(f_unobs)|_{z_ref} * dz + grad f_obs(z_ref)). Linear in dz for
// fixed z_ref.
Eigen::VectorXd second_order_rhs(const Eigen::VectorXd& dz, const Eigen::VectorXd& z_ref,
                                 const DecomposedCost& cost);

// Mean-field mask: zero Hessian couplings between non-neighbors; the
// diagonal passes through unchanged.
Eigen::MatrixXd mask_hessian(const Eigen::MatrixXd& h, const graph::Graph& g);

// Sum of squared deviations from the population mean.
double burden_variance(const Eigen::VectorXd& kappa);

// Option inputs (f_patrol, f_loiter) for a battery level: the exhausted
// agent prefers loiter.
std::pair<double, double> burden_inputs(const BurdenModel& model, double kappa_i, double eta1);

// The equal-cost-burden Hessian for n homogeneous agents: zero diagonal,
// off-diagonal (-2/n)(1 - 1/n) dkappa_dz^2, negated in dissensus mode.
Eigen::MatrixXd burden_hessian(const BurdenModel& model, int n);

// -L zbar - eta3 * grad_F(zbar). L must be a symmetric zero-row-sum Laplacian.
Eigen::VectorXd consensus_gradient_rhs(const Eigen::VectorXd& zbar, const Eigen::MatrixXd& L,
                                       const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_F,
                                       double eta3);

// (I - eps L) chi + eta4 F_D(chi); eps must lie in (0, 1/max_i L_ii).
Eigen::VectorXd discrete_consensus_step(const Eigen::VectorXd& chi, double eps,
                                        const Eigen::MatrixXd& L,
                                        const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& F_D,
                                        double eta4);

// Phi(zbar) = 1/2 zbar^T (-D + Gamma)^T zbar + F(zbar). Gamma must be
// symmetric (the potential exists only then).
double potential_value(const Eigen::VectorXd& zbar, const Eigen::MatrixXd& D,
                       const Eigen::MatrixXd& Gamma,
                       const std::function<double(const Eigen::VectorXd&)>& F);

// U_i = -1/2 d_i zbar_i^2 + 1/2 zbar_i sum_{k != i} gamma_ik zbar_k + F_i.
double local_utility(int i, const Eigen::VectorXd& zbar, const Eigen::MatrixXd& D,
                     const Eigen::MatrixXd& Gamma,
                     const std::function<double(int, const Eigen::VectorXd&)>& F_i);

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> z;
  bool settled = false;
  int settled_step = -1;
};

struct EqualBurdenOptions {
  // Baseline exhaustion per agent; the local linear surrogate is
  // kappa_i(z_i) = kappa0_i + dkappa_dz * z_i.
  Eigen::VectorXd kappa0;
  bool use_hessian = true;   // false: gradient-only ablation
  double ball_radius = 1.0;  // radial clip realizing the domain ||z||_2 <= 1
  double settle_tol = 1e-6;
  int settle_window = 50;
};

// Integrates the second-order flow built from the burden model: the
// gradient of the observable variance component evaluated self-consistently
// along the flow, the masked burden Hessian as the unobserved term. RK4 at
// fixed dt with radial clipping to the unit ball.
FlowTrajectory equal_burden_flow(int n, const BurdenModel& model, const graph::Graph& g,
                                 double eta, const Eigen::VectorXd& z0, int steps, double dt,
                                 const EqualBurdenOptions& opts);

}  // namespace cbpa::census
