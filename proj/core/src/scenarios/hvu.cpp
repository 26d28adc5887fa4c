#include "cbpa/scenarios/hvu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cbpa/census_opt.hpp"

namespace cbpa::scenarios {

void HvuConfig::validate() const {
  if (!(j_min < j_max)) throw std::invalid_argument("hvu: j_min must be < j_max");
  if (!(patrol_radius > 0.0) || !(loiter_radius > 0.0))
    throw std::invalid_argument("hvu: radii must be positive");
  if (!(comp_dt > 0.0) || !(comp_t_max > 0.0))
    throw std::invalid_argument("hvu: competition time parameters must be positive");
  if (!(comp_commit_scale > 0.0) || !(comp_half_energy > 0.0))
    throw std::invalid_argument("hvu: competition scales must be positive");
}

double intercept_cost(const Eigen::Vector2d& pos, const std::vector<Eigen::Vector2d>& targets,
                      double eta2) {
  if (targets.empty()) throw std::invalid_argument("intercept_cost: no targets");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : targets) best = std::min(best, (pos - t).norm());
  return eta2 * best;
}

double intercept_input(double cost, const HvuConfig& cfg) {
  if (cost < 0.0) throw std::invalid_argument("intercept_input: negative cost");
  if (cost < cfg.j_min) return cfg.f_intcpt_max;
  if (cost > cfg.j_max) return 0.0;
  return cfg.f_intcpt_max * (cfg.j_max - cost) / (cfg.j_max - cfg.j_min);
}

HvuInputs hvu_allocation_step(const std::vector<Eigen::Vector2d>& positions,
                              const Eigen::VectorXd& kappa,
                              const std::vector<Eigen::Vector2d>& intruders,
                              const HvuConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(positions.size());
  if (kappa.size() != n)
    throw std::invalid_argument("hvu_allocation_step: kappa size mismatch");

  HvuInputs in;
  // Patrol consumes faster (xi_active), loiter slower (xi_loiter); the burden
  // pair steers high-battery agents toward the expensive option.
  census::BurdenModel burden;
  burden.dkappa_dz = cfg.xi_active - cfg.xi_loiter;
  in.f_patrol.resize(n);
  in.f_loiter.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto [fp, fl] = census::burden_inputs(burden, kappa(i), cfg.eta1);
    in.f_patrol(i) = fp;
    in.f_loiter(i) = fl;
  }

  in.f_intercept = Eigen::VectorXd::Zero(n);
  if (!intruders.empty()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double j = intercept_cost(positions[static_cast<size_t>(i)], intruders, cfg.eta2);
      in.f_intercept(i) = intercept_input(j, cfg);
    }
  }
  return in;
}

InterceptAllocation settle_intercept_allocation(const Eigen::VectorXd& f_intercept,
                                                const graph::Graph& g, const HvuConfig& cfg) {
  cfg.validate();
  const auto n = f_intercept.size();
  if (g.n_nodes() != static_cast<int>(n))
    throw std::invalid_argument("settle_intercept_allocation: graph size mismatch");

  const double h2 = cfg.comp_half_energy * cfg.comp_half_energy;
  const double eps = cfg.comp_commit_scale;
  // Suppression weight carried by each agent's broadcast: evidence strength
  // discounted when it is weak relative to the half-energy scale.
  Eigen::VectorXd w(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double e = f_intercept(k) * f_intercept(k);
    w(k) = f_intercept(k) * e / (e + h2);
  }
  auto rhs = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd dy(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double social = 0.0;
      for (int k : g.neighbors(static_cast<int>(i))) {
        // Only committed neighbors (positive opinion) suppress.
        double commit = y(k) > 0.0 ? std::tanh(y(k) / eps) : 0.0;
        social += w(k) * commit;
      }
      dy(i) = cfg.comp_rate * (-y(i) + f_intercept(i) - cfg.comp_inhibition * social);
    }
    return dy;
  };

  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  const double dt = cfg.comp_dt;
  const auto steps = static_cast<int>(std::ceil(cfg.comp_t_max / dt));
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd k1 = rhs(y);
    Eigen::VectorXd k2 = rhs(y + 0.5 * dt * k1);
    Eigen::VectorXd k3 = rhs(y + 0.5 * dt * k2);
    Eigen::VectorXd k4 = rhs(y + dt * k3);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (k1.lpNorm<Eigen::Infinity>() < 1e-9) break;
  }

  InterceptAllocation out;
  out.y = y;
  out.intercepting.resize(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    bool on = y(i) > 0.0;
    out.intercepting[static_cast<size_t>(i)] = on;
    if (on) ++out.count;
  }
  return out;
}

std::vector<int> centralized_intercept_oracle(const Eigen::VectorXd& costs, int k) {
  if (k < 0 || k > costs.size())
    throw std::invalid_argument("centralized_intercept_oracle: k out of range");
  std::vector<int> idx(static_cast<size_t>(costs.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return costs(a) < costs(b); });
  idx.resize(static_cast<size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace cbpa::scenarios
