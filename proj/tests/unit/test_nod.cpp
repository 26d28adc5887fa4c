#include <cmath>

#include "cbpa/graph.hpp"
#include "cbpa/nod.hpp"
#include "cbpa/rng.hpp"
#include "doctest.h"

using namespace cbpa;
using namespace cbpa::nod;

namespace {

OpinionState random_state(rng::Stream& rnd, int n, int opts, double scale) {
  OpinionState st;
  st.z.resize(n, opts);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < opts; ++j) st.z(i, j) = rnd.uniform(-scale, scale);
  st.z = project_rows_zero_sum(st.z);
  return st;
}

}  // namespace

TEST_CASE("zero-sum projection") {
  Eigen::VectorXd v(2);
  v << 1, 1;
  CHECK(project_zero_sum(v).isZero(1e-15));
  v << 1, -1;
  CHECK((project_zero_sum(v) - v).norm() == doctest::Approx(0.0));
  Eigen::VectorXd w(3);
  w << 2, 0, 1;
  Eigen::VectorXd expect(3);
  expect << 1, -1, 0;
  CHECK((project_zero_sum(w) - expect).norm() < 1e-15);
  // Idempotent.
  CHECK((project_zero_sum(project_zero_sum(w)) - project_zero_sum(w)).norm() < 1e-15);
}

TEST_CASE("saturation is an odd unit-slope sigmoid") {
  CHECK(saturation(0.0) == 0.0);
  for (double x : {0.3, 1.7, -2.5, 10.0}) {
    CHECK(saturation(x) == doctest::Approx(-saturation(-x)));
    CHECK(std::fabs(saturation(x)) < 1.0);
  }
  CHECK(saturation(1e-6) == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("nod_rhs basics") {
  auto params = AgentParams::homogeneous(1, 2, 1.0, 0.0);
  AdjacencyTensor t(1, 2);

  OpinionState st;
  st.z = Eigen::MatrixXd::Zero(1, 2);
  CHECK(nod_rhs(st, params, t).isZero(1e-15));

  st.z << 0.1, -0.1;
  Eigen::MatrixXd dz = nod_rhs(st, params, t);
  CHECK(dz(0, 0) == doctest::Approx(-0.1));
  CHECK(dz(0, 1) == doctest::Approx(0.1));
}

TEST_CASE("nod_rhs rejects dimension mismatch") {
  auto params = AgentParams::homogeneous(2, 2, 1.0, 0.5);
  AdjacencyTensor t(3, 2);
  OpinionState st;
  st.z = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(nod_rhs(st, params, t), std::invalid_argument);
}

TEST_CASE("rhs rows stay zero-sum") {
  rng::Stream rnd(11);
  auto g = graph::complete_graph(4);
  auto [adj, lap] = graph::adjacency_and_laplacian(g);
  auto t = AdjacencyTensor::homogeneous(adj, 3, 1.0, -0.4, 0.2, -0.1);
  auto params = AgentParams::homogeneous(4, 3, 1.0, 0.7);
  for (int rep = 0; rep < 50; ++rep) {
    auto st = random_state(rnd, 4, 3, 1.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) params.b(i, j) = rnd.uniform(-1, 1);
    Eigen::MatrixXd dz = nod_rhs(st, params, t);
    for (int i = 0; i < 4; ++i) CHECK(std::fabs(dz.row(i).sum()) < 1e-12);
  }
}

TEST_CASE("two-agent consensus above threshold aligns signs") {
  // Same-option cooperative coupling on K2; above the critical attention the
  // agreement equilibria are the attractors.
  auto g = graph::complete_graph(2);
  auto [adj, lap] = graph::adjacency_and_laplacian(g);
  auto t = AdjacencyTensor::homogeneous(adj, 2, 1.0, 0.0);
  double ustar = critical_attention(1.0, graph::spectral_summary(g).lambda_max);
  auto params = AgentParams::homogeneous(2, 2, 1.0, 2.0);
  REQUIRE(2.0 > ustar);
  rng::Stream rnd(21);
  for (int rep = 0; rep < 20; ++rep) {
    auto st = random_state(rnd, 2, 2, 0.5);
    auto traj = integrate(st, params, t, std::nullopt, 0.02, 4000);
    const auto& zf = traj.z.back();
    CHECK(zf.cwiseAbs().maxCoeff() > 0.1);
    CHECK(zf(0, 0) * zf(1, 0) > 0.0);
  }
}

TEST_CASE("scalar reduction matches the full tensor form") {
  rng::Stream rnd(31);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 3;
    Eigen::VectorXd alpha(n), zeta(n), f(n);
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      alpha(i) = rnd.uniform(-1, 1);
      zeta(i) = rnd.uniform(-1, 1);
      f(i) = rnd.uniform(-1, 1);
      for (int k = 0; k < n; ++k)
        if (k != i) gamma(i, k) = rnd.uniform(-1, 1);
    }
    double u = rnd.uniform(0.1, 2.0);
    auto params_scalar = AgentParams::homogeneous(n, 2, 1.0, u);
    Eigen::VectorXd scalar = two_option_rhs(zeta, alpha, gamma, params_scalar, f);

    // The tensor realization carries u/2: each option contributes one
    // saturation term with the same argument.
    auto t = AdjacencyTensor::from_two_option(alpha, gamma);
    auto params_full = AgentParams::homogeneous(n, 2, 1.0, u / 2.0);
    OpinionState st;
    st.z.resize(n, 2);
    st.z.col(0) = zeta;
    st.z.col(1) = -zeta;
    params_full.b.col(0) = f;
    params_full.b.col(1) = -f;
    Eigen::MatrixXd full = nod_rhs(st, params_full, t);
    CHECK((full.col(0) - scalar).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((full.col(1) + scalar).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("attention dynamics relax between the rails") {
  AttentionState att;
  att.u = Eigen::VectorXd::Constant(2, 0.3);
  att.tau_u = 2.0;
  att.u_lo = 0.1;
  att.u_hi = 2.5;
  att.attention_adjacency = Eigen::MatrixXd::Identity(2, 2);

  OpinionState st;
  st.z = Eigen::MatrixXd::Zero(2, 2);

  // z = 0: relaxation toward u_lo.
  att.u.setConstant(att.u_lo);
  CHECK(attention_rhs(att, st).isZero(1e-12));
  att.u.setConstant(att.u_hi);
  Eigen::VectorXd du = attention_rhs(att, st);
  for (int i = 0; i < 2; ++i) CHECK(du(i) == doctest::Approx((att.u_lo - att.u_hi) / att.tau_u));

  // Large opinion energy: u converges to u_hi within 1% after 10 tau_u.
  st.z << 50.0, -50.0, 50.0, -50.0;
  att.u.setConstant(att.u_lo);
  double dt = 0.01;
  for (int s = 0; s < static_cast<int>(10.0 * att.tau_u / dt); ++s)
    att.u += dt * attention_rhs(att, st);
  for (int i = 0; i < 2; ++i) CHECK(att.u(i) == doctest::Approx(att.u_hi).epsilon(0.01));
}

TEST_CASE("critical attention formula and bifurcation bracketing") {
  CHECK(critical_attention(1.0, 2.0) == doctest::Approx(0.5));
  CHECK(critical_attention(2.0, 1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(critical_attention(1.0, 0.0), std::invalid_argument);

  // Homogeneous K3 with unit same-option coupling: below u* opinions decay,
  // above they lock in.
  auto g = graph::complete_graph(3);
  auto [adj, lap] = graph::adjacency_and_laplacian(g);
  auto t = AdjacencyTensor::homogeneous(adj, 2, 1.0, 0.0);
  double ustar = critical_attention(1.0, graph::spectral_summary(g).lambda_max);
  rng::Stream rnd(41);
  auto st = random_state(rnd, 3, 2, 0.1);
  auto low = integrate(st, AgentParams::homogeneous(3, 2, 1.0, 0.9 * ustar), t, std::nullopt,
                       0.02, 6000);
  CHECK(low.z.back().cwiseAbs().maxCoeff() < 1e-3);
  auto high = integrate(st, AgentParams::homogeneous(3, 2, 1.0, 1.2 * ustar), t, std::nullopt,
                        0.02, 6000);
  CHECK(high.z.back().cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("coupling classification") {
  auto adj = Eigen::MatrixXd::Constant(2, 2, 1.0) - Eigen::MatrixXd::Identity(2, 2);
  CHECK(classify_coupling(AdjacencyTensor::homogeneous(adj, 2, 1.0, 0.0), 0, 1) ==
        Coupling::cooperation);
  CHECK(classify_coupling(AdjacencyTensor::homogeneous(adj, 2, 0.0, 1.0), 0, 1) ==
        Coupling::competition);
  CHECK(classify_coupling(AdjacencyTensor::homogeneous(adj, 2, 0.7, 0.7), 0, 1) ==
        Coupling::neutral);
}

TEST_CASE("strongest option readout") {
  Eigen::VectorXd a(2);
  a << 0.5, -0.5;
  CHECK(strongest_option(a) == 0);
  Eigen::VectorXd b(3);
  b << 0.3, 0.3, -0.6;
  CHECK(strongest_option(b) == 0);  // tie broken to the first index
  b << -1, 0, 1;
  CHECK(strongest_option(b) == 2);
}

TEST_CASE("integrator order and decay") {
  // Unforced u=0: pure linear decay at rate d.
  auto params = AgentParams::homogeneous(1, 2, 1.0, 0.0);
  AdjacencyTensor t(1, 2);
  OpinionState st;
  st.z.resize(1, 2);
  st.z << 1.0, -1.0;
  auto traj = integrate(st, params, t, std::nullopt, 0.1, 10);
  for (size_t s = 1; s < traj.z.size(); ++s)
    CHECK(traj.z[s](0, 0) / traj.z[s - 1](0, 0) == doctest::Approx(std::exp(-0.1)).epsilon(1e-6));

  // RK4: halving dt shrinks the endpoint error ~16x.
  auto end_err = [&](double dt) {
    int steps = static_cast<int>(std::round(1.0 / dt));
    auto tr = integrate(st, params, t, std::nullopt, dt, steps);
    return std::fabs(tr.z.back()(0, 0) - std::exp(-1.0));
  };
  double e1 = end_err(0.1), e2 = end_err(0.05);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("odd symmetry of the unforced flow") {
  rng::Stream rnd(51);
  auto g = graph::complete_graph(3);
  auto [adj, lap] = graph::adjacency_and_laplacian(g);
  auto t = AdjacencyTensor::homogeneous(adj, 3, 0.8, -0.3, 0.1, 0.0);
  auto params = AgentParams::homogeneous(3, 3, 1.0, 1.1);
  auto st = random_state(rnd, 3, 3, 0.4);
  OpinionState neg;
  neg.z = -st.z;
  auto a = integrate(st, params, t, std::nullopt, 0.02, 500);
  auto b = integrate(neg, params, t, std::nullopt, 0.02, 500);
  for (size_t s = 0; s < a.z.size(); ++s)
    CHECK((a.z[s] + b.z[s]).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("divergence guard aborts loudly") {
  // A strongly self-exciting tensor with negative damping via huge input.
  auto params = AgentParams::homogeneous(1, 2, 1e-6, 0.0);
  params.b << 1e9, -1e9;
  AdjacencyTensor t(1, 2);
  OpinionState st;
  st.z = Eigen::MatrixXd::Zero(1, 2);
  CHECK_THROWS_AS(integrate(st, params, t, std::nullopt, 0.1, 100), std::runtime_error);
}

TEST_CASE("opinion cascade through the attention feedback") {
  // K3, low initial attention, one agent pushed hard on option 0: everyone's
  // attention crosses the threshold and all opinions align with the input.
  auto g = graph::complete_graph(3);
  auto [adj, lap] = graph::adjacency_and_laplacian(g);
  auto t = AdjacencyTensor::homogeneous(adj, 2, 1.0, 0.0);
  auto params = AgentParams::homogeneous(3, 2, 1.0, 0.0);  // u comes from att
  AttentionState att;
  att.u = Eigen::VectorXd::Constant(3, 0.1);
  att.tau_u = 2.0;
  att.u_lo = 0.1;
  att.u_hi = 2.5;
  att.attention_adjacency = adj + Eigen::MatrixXd::Identity(3, 3);

  OpinionState st;
  st.z = Eigen::MatrixXd::Zero(3, 2);
  auto hook = [](double, const OpinionState&) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 2);
    b(0, 0) = 1.0;
    b(0, 1) = -1.0;
    return b;
  };
  double ustar = critical_attention(1.0, graph::spectral_summary(g).lambda_max);
  auto traj = integrate(st, params, t, att, 0.02, 8000, hook);
  REQUIRE(!traj.u.empty());
  for (int i = 0; i < 3; ++i) {
    CHECK(traj.u.back()(i) > ustar);
    CHECK(traj.z.back()(i, 0) > 0.1);
  }
}
