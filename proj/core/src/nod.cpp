#include "cbpa/nod.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cbpa::nod {

double OpinionState::row_sum_drift() const {
  return z.rowwise().sum().cwiseAbs().maxCoeff();
}

AgentParams AgentParams::homogeneous(int n_agents, int n_options, double d, double u) {
  AgentParams p;
  p.d = Eigen::VectorXd::Constant(n_agents, d);
  p.u = Eigen::VectorXd::Constant(n_agents, u);
  p.b = Eigen::MatrixXd::Zero(n_agents, n_options);
  return p;
}

void AgentParams::validate() const {
  if ((d.array() <= 0.0).any()) throw std::invalid_argument("nod: resistance d must be positive");
  if ((u.array() < 0.0).any()) throw std::invalid_argument("nod: attention u must be nonnegative");
}

AdjacencyTensor::AdjacencyTensor(int n_agents, int n_options)
    : n_agents_(n_agents),
      n_options_(n_options),
      data_(static_cast<size_t>(n_agents) * n_agents * n_options * n_options, 0.0) {
  if (n_agents <= 0 || n_options <= 0)
    throw std::invalid_argument("nod: tensor dimensions must be positive");
}

AdjacencyTensor AdjacencyTensor::homogeneous(const Eigen::MatrixXd& agent_adjacency,
                                             int n_options, double same_option,
                                             double cross_option, double self_same,
                                             double self_cross) {
  const int n = static_cast<int>(agent_adjacency.rows());
  AdjacencyTensor t(n, n_options);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const bool self = (i == k);
      const double w = self ? 1.0 : agent_adjacency(i, k);
      if (w == 0.0 && !self) continue;
      for (int j = 0; j < n_options; ++j) {
        for (int l = 0; l < n_options; ++l) {
          double v;
          if (self)
            v = (j == l) ? self_same : self_cross;
          else
            v = w * ((j == l) ? same_option : cross_option);
          t.entry(i, k, j, l) = v;
        }
      }
    }
  }
  return t;
}

AdjacencyTensor AdjacencyTensor::from_two_option(const Eigen::VectorXd& alpha,
                                                 const Eigen::MatrixXd& gamma) {
  const int n = static_cast<int>(alpha.size());
  if (gamma.rows() != n || gamma.cols() != n)
    throw std::invalid_argument("nod: gamma shape mismatch");
  AdjacencyTensor t(n, 2);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double g = (i == k) ? alpha(i) : gamma(i, k);
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) t.entry(i, k, j, l) = (j == l) ? g : -g;
    }
  }
  return t;
}

void AdjacencyTensor::validate() const {
  for (double v : data_)
    if (!std::isfinite(v)) throw std::invalid_argument("nod: tensor entry not finite");
  for (int i = 0; i < n_agents_; ++i)
    for (int j = 0; j < n_options_; ++j)
      if (entry(i, i, j, j) < 0.0)
        throw std::invalid_argument("nod: intra-agent same-option coupling must be >= 0");
}

void AttentionState::validate() const {
  if (!(u_lo < u_hi)) throw std::invalid_argument("nod: attention bounds require u_lo < u_hi");
  if (tau_u <= 0.0) throw std::invalid_argument("nod: tau_u must be positive");
}

Eigen::VectorXd project_zero_sum(const Eigen::VectorXd& v) {
  return v.array() - v.mean();
}

Eigen::MatrixXd project_rows_zero_sum(const Eigen::MatrixXd& m) {
  return m.colwise() - m.rowwise().mean();
}

double saturation(double x) { return std::tanh(x); }

Eigen::MatrixXd nod_rhs(const OpinionState& state, const AgentParams& params,
                        const AdjacencyTensor& tensor) {
  const int na = state.n_agents();
  const int no = state.n_options();
  if (tensor.n_agents() != na || tensor.n_options() != no)
    throw std::invalid_argument("nod_rhs: tensor/state dimension mismatch");
  if (params.d.size() != na || params.u.size() != na || params.b.rows() != na ||
      params.b.cols() != no)
    throw std::invalid_argument("nod_rhs: params/state dimension mismatch");

  Eigen::MatrixXd f(na, no);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < no; ++j) {
      double social = 0.0;
      for (int l = 0; l < no; ++l) {
        double acc = 0.0;
        for (int k = 0; k < na; ++k) acc += tensor.entry(i, k, j, l) * state.z(k, l);
        social += saturation(acc);
      }
      f(i, j) = -params.d(i) * state.z(i, j) + params.u(i) * social + params.b(i, j);
    }
  }
  return project_rows_zero_sum(f);
}

Eigen::VectorXd two_option_rhs(const Eigen::VectorXd& z, const Eigen::VectorXd& alpha,
                               const Eigen::MatrixXd& gamma, const AgentParams& params,
                               const Eigen::VectorXd& f_opt,
                               const std::function<double(double)>& sat) {
  const int n = static_cast<int>(z.size());
  if (alpha.size() != n || gamma.rows() != n || gamma.cols() != n || f_opt.size() != n ||
      params.d.size() != n || params.u.size() != n)
    throw std::invalid_argument("two_option_rhs: dimension mismatch");
  auto s = sat ? sat : [](double x) { return saturation(x); };
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    double arg = alpha(i) * z(i);
    for (int k = 0; k < n; ++k)
      if (k != i) arg += gamma(i, k) * z(k);
    out(i) = -params.d(i) * z(i) + params.u(i) * s(arg) + f_opt(i);
  }
  return out;
}

namespace {

double attention_saturation(double x, const AttentionState& att) {
  const double x2 = x * x;
  return att.u_lo + (att.u_hi - att.u_lo) * x2 / (x2 + att.half_energy * att.half_energy);
}

}  // namespace

Eigen::VectorXd attention_rhs(const AttentionState& att, const OpinionState& state) {
  const int na = state.n_agents();
  const int no = state.n_options();
  if (att.u.size() != na || att.attention_adjacency.rows() != na)
    throw std::invalid_argument("attention_rhs: dimension mismatch");
  Eigen::VectorXd out(na);
  for (int i = 0; i < na; ++i) {
    double energy = 0.0;
    for (int k = 0; k < na; ++k) {
      const double a = att.attention_adjacency(i, k);
      if (a == 0.0) continue;
      for (int l = 0; l < no; ++l) {
        const double v = a * state.z(k, l);
        energy += v * v;
      }
    }
    energy /= static_cast<double>(no);
    // S_u takes the energy directly; the quadratic form already supplies the
    // squared argument, so pass sqrt to keep S_u's x^2 semantics.
    out(i) = (-att.u(i) + attention_saturation(std::sqrt(energy), att)) / att.tau_u;
  }
  return out;
}

double critical_attention(double d, double lambda_max_tensor) {
  if (lambda_max_tensor <= 0.0)
    throw std::invalid_argument("critical_attention: lambda_max must be positive");
  return d / lambda_max_tensor;
}

Coupling classify_coupling(const AdjacencyTensor& tensor, int i, int k) {
  const int no = tensor.n_options();
  if (no < 2) throw std::invalid_argument("classify_coupling: needs >= 2 options");
  // Homogeneity check: all same-option entries equal, all cross-option equal.
  const double same = tensor.entry(i, k, 0, 0);
  const double cross = tensor.entry(i, k, 0, 1);
  for (int j = 0; j < no; ++j) {
    for (int l = 0; l < no; ++l) {
      const double v = tensor.entry(i, k, j, l);
      if (j == l ? (v != same) : (v != cross))
        throw std::invalid_argument("classify_coupling: tensor not homogeneous for this pair");
    }
  }
  const double diff = same - cross;
  if (diff > 0.0) return Coupling::cooperation;
  if (diff < 0.0) return Coupling::competition;
  return Coupling::neutral;
}

int strongest_option(const Eigen::VectorXd& z_i) {
  int best = 0;
  for (int j = 1; j < z_i.size(); ++j)
    if (z_i(j) > z_i(best)) best = j;
  return best;
}

Trajectory integrate(OpinionState state, AgentParams params, const AdjacencyTensor& tensor,
                     std::optional<AttentionState> att, double dt, int steps,
                     const InputHook& input_hook, const IntegrateOptions& opts) {
  if (dt <= 0.0) throw std::invalid_argument("integrate: dt must be positive");
  params.validate();
  if (att) att->validate();

  Trajectory traj;
  auto store = [&](double t) {
    traj.times.push_back(t);
    traj.z.push_back(state.z);
    if (att) traj.u.push_back(att->u);
  };
  store(0.0);

  int calm_steps = 0;
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    if (input_hook) params.b = input_hook(t, state);
    if (att) params.u = att->u;

    // RK4 stage evaluations; b and (for the z-flow stages) u are held over
    // the step, while the attention ODE uses its own staged values.
    auto zdot = [&](const Eigen::MatrixXd& z) {
      OpinionState st{z};
      return nod_rhs(st, params, tensor);
    };
    const Eigen::MatrixXd k1 = zdot(state.z);
    const Eigen::MatrixXd k2 = zdot(state.z + 0.5 * dt * k1);
    const Eigen::MatrixXd k3 = zdot(state.z + 0.5 * dt * k2);
    const Eigen::MatrixXd k4 = zdot(state.z + dt * k3);
    const Eigen::MatrixXd dz = (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (att) {
      auto udot = [&](const Eigen::VectorXd& u) {
        AttentionState a = *att;
        a.u = u;
        return attention_rhs(a, state);
      };
      const Eigen::VectorXd j1 = udot(att->u);
      const Eigen::VectorXd j2 = udot(att->u + 0.5 * dt * j1);
      const Eigen::VectorXd j3 = udot(att->u + 0.5 * dt * j2);
      const Eigen::VectorXd j4 = udot(att->u + dt * j3);
      att->u += (dt / 6.0) * (j1 + 2.0 * j2 + 2.0 * j3 + j4);
    }

    state.z += dz;
    state.z = project_rows_zero_sum(state.z);  // exact on the invariant set

    if (!state.z.allFinite() || state.z.cwiseAbs().maxCoeff() > opts.divergence_guard)
      throw std::runtime_error("integrate: divergence at step " + std::to_string(s) +
                               " (||z||_inf=" + std::to_string(state.z.cwiseAbs().maxCoeff()) +
                               ")");

    const bool last = (s + 1 == steps);
    if (last || ((s + 1) % std::max(opts.store_every, 1) == 0)) store((s + 1) * dt);

    const double rate = k1.cwiseAbs().maxCoeff();
    calm_steps = (rate < opts.settle_tol) ? calm_steps + 1 : 0;
    if (calm_steps >= opts.settle_window) {
      traj.settled = true;
      if (traj.settled_step < 0) traj.settled_step = s + 1;
      if (opts.stop_when_settled) {
        if (traj.times.back() != (s + 1) * dt) store((s + 1) * dt);
        break;
      }
    }
  }
  return traj;
}

}  // namespace cbpa::nod
