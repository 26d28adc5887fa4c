#include <cmath>

#include "cbpa/graph.hpp"
#include "doctest.h"

using namespace cbpa::graph;

TEST_CASE("graph construction canonicalizes and deduplicates edges") {
  Graph g(4, {{1, 0}, {0, 1}, {2, 3}});
  CHECK(g.n_nodes() == 4);
  CHECK(g.edges().size() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(g.has_edge(3, 2));
  CHECK(!g.has_edge(0, 2));
  CHECK(g.degree(0) == 1);
}

TEST_CASE("graph rejects self loops and out-of-range nodes") {
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(-1, {}), std::invalid_argument);
}

TEST_CASE("complete and path graphs have expected shape") {
  auto k5 = complete_graph(5);
  CHECK(k5.edges().size() == 10);
  for (int i = 0; i < 5; ++i) CHECK(k5.degree(i) == 4);

  auto p4 = path_graph(4);
  CHECK(p4.edges().size() == 3);
  CHECK(p4.degree(0) == 1);
  CHECK(p4.degree(1) == 2);
  CHECK(is_connected(p4));
  CHECK(!is_connected(Graph(3, {{0, 1}})));
  CHECK(is_connected(Graph(1, {})));
}

TEST_CASE("laplacian rows sum to zero and adjacency is symmetric") {
  Graph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}});
  auto [a, l] = adjacency_and_laplacian(g);
  CHECK((a - a.transpose()).norm() == doctest::Approx(0.0));
  CHECK(a.diagonal().norm() == doctest::Approx(0.0));
  for (int i = 0; i < 5; ++i) {
    CHECK(l.row(i).sum() == doctest::Approx(0.0));
    CHECK(l(i, i) == doctest::Approx(g.degree(i)));
  }
}

TEST_CASE("complete graph spectrum matches closed form") {
  // K_n adjacency: lambda_max = n-1 with the uniform eigenvector,
  // lambda_min = -1 with multiplicity n-1.
  for (int n : {2, 3, 5, 8}) {
    auto s = spectral_summary(complete_graph(n));
    CHECK(s.lambda_max == doctest::Approx(n - 1.0).epsilon(1e-10));
    CHECK(s.lambda_min == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(s.v_plus.size() == n);
    for (int i = 0; i < n; ++i)
      CHECK(s.v_plus(i) == doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(1e-10));
    CHECK(min_eigenspace(complete_graph(n), 1e-8).size() == size_t(n - 1));
  }
}

TEST_CASE("path graph spectrum matches closed form") {
  // P_n adjacency eigenvalues are 2 cos(k pi / (n+1)).
  for (int n : {2, 3, 4, 7}) {
    auto s = spectral_summary(path_graph(n));
    CHECK(s.lambda_max == doctest::Approx(2.0 * std::cos(M_PI / (n + 1))).epsilon(1e-10));
    CHECK(s.lambda_min == doctest::Approx(2.0 * std::cos(n * M_PI / (n + 1))).epsilon(1e-10));
    // Top eigenvector of a connected graph is entrywise positive.
    for (int i = 0; i < n; ++i) CHECK(s.v_plus(i) > 0.0);
    CHECK(s.v_plus.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("eigenvector equation holds for an irregular graph") {
  Graph g(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}});
  auto [a, l] = adjacency_and_laplacian(g);
  auto s = spectral_summary(g);
  CHECK((a * s.v_plus - s.lambda_max * s.v_plus).norm() < 1e-9);
  CHECK((a * s.v_minus - s.lambda_min * s.v_minus).norm() < 1e-9);
}
