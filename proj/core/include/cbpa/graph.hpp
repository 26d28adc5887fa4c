// Undirected communication graphs and the spectral quantities the opinion
// dynamics depends on (adjacency, Laplacian, extremal eigenpairs).
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace cbpa::graph {

// Simple undirected graph without self loops. Node indices are [0, n_nodes).
class Graph {
public:
  Graph() = default;
  Graph(int n_nodes, const std::vector<std::pair<int, int>>& edges);

  int n_nodes() const { return n_nodes_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return adj_.at(i); }
  int degree(int i) const { return static_cast<int>(adj_.at(i).size()); }
  bool has_edge(int i, int j) const;

private:
  int n_nodes_ = 0;
  std::vector<std::pair<int, int>> edges_;      // canonical (min,max) pairs
  std::vector<std::vector<int>> adj_;
};

Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges);

// Convenience constructors used throughout tests and scenarios.
Graph complete_graph(int n);
Graph path_graph(int n);

// True iff a path exists between every node pair (BFS reachability).
bool is_connected(const Graph& g);

// A symmetric 0/1 with zero diagonal; L = D - A (zero row sums).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> adjacency_and_laplacian(const Graph& g);

// Extremal eigenpairs of the adjacency matrix, unit norm. For a connected
// graph the top eigenvector is sign-fixed to all-positive entries and the
// bottom eigenvector has its first nonzero entry positive.
struct SpectralSummary {
  double lambda_max = 0.0;
  Eigen::VectorXd v_plus;
  double lambda_min = 0.0;
  Eigen::VectorXd v_minus;
};

SpectralSummary spectral_summary(const Graph& g);

// All unit eigenvectors whose eigenvalue lies within tol of lambda_min,
// for callers that need the full bottom eigenspace (it can have geometric
// multiplicity > 1, e.g. complete graphs).
std::vector<Eigen::VectorXd> min_eigenspace(const Graph& g, double tol = 1e-9);

}  // namespace cbpa::graph
