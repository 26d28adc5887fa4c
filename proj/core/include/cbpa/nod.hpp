// Nonlinear opinion dynamics: right-hand side, attention feedback, the
// zero-sum projection constraint, a fixed-step integrator, and decision
// readout utilities.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

namespace cbpa::nod {

// Per-agent opinions over options. Row i is agent i; each row sums to zero
// (invariant set of the flow, maintained by projection).
struct OpinionState {
  Eigen::MatrixXd z;  // (N_a, N_o)

  int n_agents() const { return static_cast<int>(z.rows()); }
  int n_options() const { return static_cast<int>(z.cols()); }
  // Largest row-sum deviation from zero.
  double row_sum_drift() const;
};

struct AgentParams {
  Eigen::VectorXd d;  // resistance, d[i] > 0
  Eigen::VectorXd u;  // attention, u[i] >= 0
  Eigen::MatrixXd b;  // exogenous input, (N_a, N_o); set each step

  static AgentParams homogeneous(int n_agents, int n_options, double d, double u);
  void validate() const;
};

// Four-index influence weights: entry(i, k, j, l) is the influence of agent
// k's opinion on option l upon agent i's opinion on option j.
class AdjacencyTensor {
public:
  AdjacencyTensor() = default;
  AdjacencyTensor(int n_agents, int n_options);

  double& entry(int i, int k, int j, int l) { return data_[index(i, k, j, l)]; }
  double entry(int i, int k, int j, int l) const { return data_[index(i, k, j, l)]; }

  int n_agents() const { return n_agents_; }
  int n_options() const { return n_options_; }

  // Homogeneous tensor over a 0/1 agent adjacency matrix: inter-agent
  // couplings are same_option on (j,j) and cross_option on (j,l), intra-agent
  // couplings are self_same and self_cross.
  static AdjacencyTensor homogeneous(const Eigen::MatrixXd& agent_adjacency,
                                     int n_options, double same_option,
                                     double cross_option, double self_same = 0.0,
                                     double self_cross = 0.0);

  // Two-option tensor realizing a scalar coupling matrix: alpha on the
  // diagonal, gamma off it. Uses the antisymmetric option structure
  // A^{jj} = G, A^{jl} = -G so that the scalar reduction holds exactly
  // (the scalar model's attention u maps to u/2 in the tensor form).
  static AdjacencyTensor from_two_option(const Eigen::VectorXd& alpha,
                                         const Eigen::MatrixXd& gamma);

  void validate() const;

private:
  size_t index(int i, int k, int j, int l) const {
    return ((static_cast<size_t>(i) * n_agents_ + k) * n_options_ + j) * n_options_ + l;
  }
  int n_agents_ = 0;
  int n_options_ = 0;
  std::vector<double> data_;
};

struct AttentionState {
  Eigen::VectorXd u;                    // per-agent attention
  double tau_u = 1.0;                   // time constant
  double u_lo = 0.0;                    // limit of S_u at zero opinion energy
  double u_hi = 1.0;                    // limit of S_u at large opinion energy
  double half_energy = 0.25;            // c in S_u(x) = u_lo + (u_hi-u_lo) x^2/(x^2+c^2)
  Eigen::MatrixXd attention_adjacency;  // a-bar; defaults elsewhere to A + I

  void validate() const;
};

// Projection onto the zero-sum subspace: v - mean(v).
Eigen::VectorXd project_zero_sum(const Eigen::VectorXd& v);
Eigen::MatrixXd project_rows_zero_sum(const Eigen::MatrixXd& m);

// Odd sigmoid with unit slope at the origin.
double saturation(double x);

// F_ij = -d_i z_ij + u_i sum_l S(sum_k A_ik^jl z_kl) + b_ij, rows projected
// onto the zero-sum subspace.
Eigen::MatrixXd nod_rhs(const OpinionState& state, const AgentParams& params,
                        const AdjacencyTensor& tensor);

// Scalar two-option reduction: zdot_i = -d_i z_i + u_i S(alpha_i z_i +
// sum_{k != i} gamma_ik z_k) + f_opt_i. `sat` defaults to the standard
// saturation; pass the identity to study the linear regime.
Eigen::VectorXd two_option_rhs(const Eigen::VectorXd& z, const Eigen::VectorXd& alpha,
                               const Eigen::MatrixXd& gamma, const AgentParams& params,
                               const Eigen::VectorXd& f_opt,
                               const std::function<double(double)>& sat = nullptr);

// tau_u udot_i = -u_i + S_u( (1/N_o) sum_{k,l} (abar_ik z_kl)^2 ).
Eigen::VectorXd attention_rhs(const AttentionState& att, const OpinionState& state);

// u* = d / lambda_max; the bifurcation threshold for homogeneous networks.
double critical_attention(double d, double lambda_max_tensor);

enum class Coupling { cooperation, competition, neutral };

// Sign of A_ik^jj - A_ik^jl for a tensor homogeneous across options.
Coupling classify_coupling(const AdjacencyTensor& tensor, int i, int k);

// Index of the first largest entry.
int strongest_option(const Eigen::VectorXd& z_i);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> z;
  std::vector<Eigen::VectorXd> u;  // empty when attention is static
  bool settled = false;            // ||zdot||_inf < tol sustained
  int settled_step = -1;
};

struct IntegrateOptions {
  double settle_tol = 1e-6;
  int settle_window = 50;
  double divergence_guard = 1e3;
  bool stop_when_settled = false;
  int store_every = 1;  // store every k-th step (step 0 and the last always kept)
};

using InputHook = std::function<Eigen::MatrixXd(double t, const OpinionState&)>;

// Fixed-step RK4 on the opinion flow, optionally coupled with the attention
// dynamics. The exogenous input b is sampled from input_hook once per step
// and held constant across the four stages. Rows are re-projected onto the
// zero-sum subspace after every step. Throws on divergence.
Trajectory integrate(OpinionState state, AgentParams params, const AdjacencyTensor& tensor,
                     std::optional<AttentionState> att, double dt, int steps,
                     const InputHook& input_hook = nullptr,
                     const IntegrateOptions& opts = {});

}  // namespace cbpa::nod
