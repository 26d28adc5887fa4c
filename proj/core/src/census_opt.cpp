#include "cbpa/census_opt.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cbpa::census {

Eigen::VectorXd second_order_rhs(const Eigen::VectorXd& dz, const Eigen::VectorXd& z_ref,
                                 const DecomposedCost& cost) {
  if (dz.size() != z_ref.size())
    throw std::invalid_argument("second_order_rhs: dz/z_ref size mismatch");
  const Eigen::MatrixXd h = cost.hessian_unobs(z_ref);
  const Eigen::VectorXd g = cost.grad_obs(z_ref);
  if (h.rows() != dz.size() || h.cols() != dz.size() || g.size() != dz.size())
    throw std::invalid_argument("second_order_rhs: callback output size mismatch");
  Eigen::VectorXd rhs = -cost.eta * (h * dz + g);
  if (!rhs.allFinite()) throw std::runtime_error("second_order_rhs: non-finite callback output");
  return rhs;
}

Eigen::MatrixXd mask_hessian(const Eigen::MatrixXd& h, const graph::Graph& g) {
  const int n = g.n_nodes();
  if (h.rows() != n || h.cols() != n)
    throw std::invalid_argument("mask_hessian: matrix/graph size mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    out(i, i) = h(i, i);  // self-curvature survives masking
    for (int j : g.neighbors(i)) out(i, j) = h(i, j);
  }
  return out;
}

double burden_variance(const Eigen::VectorXd& kappa) {
  if (kappa.size() == 0) throw std::invalid_argument("burden_variance: empty vector");
  const double mean = kappa.mean();
  return (kappa.array() - mean).square().sum();
}

std::pair<double, double> burden_inputs(const BurdenModel& model, double kappa_i, double eta1) {
  const double f_patrol = -eta1 * model.dkappa_dz * kappa_i;
  return {f_patrol, -f_patrol};
}

Eigen::MatrixXd burden_hessian(const BurdenModel& model, int n) {
  if (n < 2) throw std::invalid_argument("burden_hessian: needs n >= 2");
  const double d2 = model.dkappa_dz * model.dkappa_dz *
                    (model.mode == BurdenMode::consensus ? 1.0 : -1.0);
  const double off = (-2.0 / n) * (1.0 - 1.0 / n) * d2;
  Eigen::MatrixXd h = Eigen::MatrixXd::Constant(n, n, off);
  h.diagonal().setZero();
  return h;
}

Eigen::VectorXd consensus_gradient_rhs(
    const Eigen::VectorXd& zbar, const Eigen::MatrixXd& L,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_F, double eta3) {
  const int n = static_cast<int>(zbar.size());
  if (L.rows() != n || L.cols() != n)
    throw std::invalid_argument("consensus_gradient_rhs: size mismatch");
  if (!L.isApprox(L.transpose(), 1e-12) ||
      L.rowwise().sum().cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("consensus_gradient_rhs: L is not a Laplacian");
  Eigen::VectorXd rhs = -L * zbar;
  if (grad_F) rhs -= eta3 * grad_F(zbar);
  return rhs;
}

Eigen::VectorXd discrete_consensus_step(
    const Eigen::VectorXd& chi, double eps, const Eigen::MatrixXd& L,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& F_D, double eta4) {
  const int n = static_cast<int>(chi.size());
  if (L.rows() != n || L.cols() != n)
    throw std::invalid_argument("discrete_consensus_step: size mismatch");
  const double d_max = L.diagonal().maxCoeff();
  if (!(eps > 0.0) || !(eps < 1.0 / d_max))
    throw std::invalid_argument("discrete_consensus_step: eps outside (0, 1/d_max)");
  Eigen::VectorXd out = chi - eps * (L * chi);
  if (F_D) out += eta4 * F_D(chi);
  return out;
}

double potential_value(const Eigen::VectorXd& zbar, const Eigen::MatrixXd& D,
                       const Eigen::MatrixXd& Gamma,
                       const std::function<double(const Eigen::VectorXd&)>& F) {
  if (!Gamma.isApprox(Gamma.transpose(), 1e-12))
    throw std::invalid_argument("potential_value: Gamma must be symmetric");
  double phi = 0.5 * zbar.dot((-D + Gamma).transpose() * zbar);
  if (F) phi += F(zbar);
  return phi;
}

double local_utility(int i, const Eigen::VectorXd& zbar, const Eigen::MatrixXd& D,
                     const Eigen::MatrixXd& Gamma,
                     const std::function<double(int, const Eigen::VectorXd&)>& F_i) {
  double coupling = 0.0;
  for (int k = 0; k < zbar.size(); ++k)
    if (k != i) coupling += Gamma(i, k) * zbar(k);
  double u = -0.5 * D(i, i) * zbar(i) * zbar(i) + 0.5 * zbar(i) * coupling;
  if (F_i) u += F_i(i, zbar);
  return u;
}

FlowTrajectory equal_burden_flow(int n, const BurdenModel& model, const graph::Graph& g,
                                 double eta, const Eigen::VectorXd& z0, int steps, double dt,
                                 const EqualBurdenOptions& opts) {
  if (!graph::is_connected(g)) throw std::invalid_argument("equal_burden_flow: graph must be connected");
  if (g.n_nodes() != n || z0.size() != n || opts.kappa0.size() != n)
    throw std::invalid_argument("equal_burden_flow: size mismatch");

  const Eigen::MatrixXd h_masked =
      opts.use_hessian ? mask_hessian(burden_hessian(model, n), g)
                       : Eigen::MatrixXd::Zero(n, n);

  const double c2 = (1.0 - 1.0 / n) * (1.0 - 1.0 / n);
  const double dk = model.dkappa_dz;
  // Observable variance component: f_obs_i = (1 - 1/n)^2 kappa_i(z_i)^2 with
  // the local linear surrogate kappa_i(z_i) = kappa0_i + dk z_i.
  auto grad_obs = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return 2.0 * c2 * dk * (opts.kappa0.array() + dk * z.array());
  };
  auto rhs = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return -eta * (h_masked * z + grad_obs(z));
  };

  FlowTrajectory traj;
  Eigen::VectorXd z = z0;
  traj.times.push_back(0.0);
  traj.z.push_back(z);

  int calm = 0;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = rhs(z);
    const Eigen::VectorXd k2 = rhs(z + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = rhs(z + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = rhs(z + dt * k3);
    z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double norm = z.norm();
    if (norm > opts.ball_radius) z *= opts.ball_radius / norm;  // radial projection onto Z-bar

    if (!z.allFinite() || z.cwiseAbs().maxCoeff() > 1e3)
      throw std::runtime_error("equal_burden_flow: divergence at step " + std::to_string(s));

    traj.times.push_back((s + 1) * dt);
    traj.z.push_back(z);

    // On the ball boundary the radial component of the rhs is absorbed by the
    // projection; settle on the tangential rate there.
    Eigen::VectorXd rate = k1;
    if (norm >= opts.ball_radius - 1e-12 && norm > 0.0) {
      const Eigen::VectorXd dir = z / z.norm();
      rate -= dir * rate.dot(dir);
    }
    calm = (rate.cwiseAbs().maxCoeff() < opts.settle_tol) ? calm + 1 : 0;
    if (calm >= opts.settle_window) {
      traj.settled = true;
      traj.settled_step = s + 1;
      break;
    }
  }
  return traj;
}

}  // namespace cbpa::census
