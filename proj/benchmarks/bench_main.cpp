// Microbenchmarks for the hot inner loops: the opinion-dynamics right-hand
// side, the assignment solver, and the behavior-grid maximizer.
#include <benchmark/benchmark.h>

#include "cbpa/graph.hpp"
#include "cbpa/hungarian.hpp"
#include "cbpa/ivp.hpp"
#include "cbpa/nod.hpp"
#include "cbpa/rng.hpp"

namespace {

void BM_NodRhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int opts = 3;
  auto g = cbpa::graph::complete_graph(n);
  auto [adj, lap] = cbpa::graph::adjacency_and_laplacian(g);
  auto params = cbpa::nod::AgentParams::homogeneous(n, opts, 1.0, 1.2);
  auto tensor = cbpa::nod::AdjacencyTensor::homogeneous(adj, opts, -0.3, 0.15, 0.4, -0.2);
  cbpa::rng::Stream rng(1);
  cbpa::nod::OpinionState st;
  st.z.resize(n, opts);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < opts; ++j) st.z(i, j) = rng.uniform(-1, 1);
  cbpa::nod::project_rows_zero_sum(st.z);
  for (auto _ : state) {
    auto dz = cbpa::nod::nod_rhs(st, params, tensor);
    benchmark::DoNotOptimize(dz);
  }
}
BENCHMARK(BM_NodRhs)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_Assignment(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  cbpa::rng::Stream rng(2);
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform(0, 100);
  for (auto _ : state) {
    auto a = cbpa::assign::min_cost_assignment(cost);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_Assignment)->Arg(7)->Arg(20)->Arg(50);

void BM_IvpSolve(benchmark::State& state) {
  using namespace cbpa::ivp;
  DecisionDomain domain({{"heading", 0.0, 345.0, 15.0}, {"speed", 0.0, 2.0, 0.5}});
  std::vector<Behavior> behaviors;
  for (int b = 0; b < 4; ++b) {
    Behavior bh;
    bh.name = "goal-" + std::to_string(b);
    bh.weight = 1.0 + b;
    double want = 30.0 * b;
    bh.objective = [want](const std::vector<double>& x) {
      return -std::abs(x[0] - want) - 10.0 * std::abs(x[1] - 1.5);
    };
    behaviors.push_back(std::move(bh));
  }
  for (auto _ : state) {
    auto s = solve(domain, behaviors);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_IvpSolve);

}  // namespace

BENCHMARK_MAIN();
