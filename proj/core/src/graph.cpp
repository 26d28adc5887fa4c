#include "cbpa/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace cbpa::graph {

Graph::Graph(int n_nodes, const std::vector<std::pair<int, int>>& edges)
    : n_nodes_(n_nodes), adj_(static_cast<size_t>(std::max(n_nodes, 0))) {
  if (n_nodes < 0) throw std::invalid_argument("graph: negative node count");
  for (auto [a, b] : edges) {
    if (a < 0 || a >= n_nodes || b < 0 || b >= n_nodes)
      throw std::invalid_argument("graph: edge index out of range: (" +
                                  std::to_string(a) + "," + std::to_string(b) + ")");
    if (a == b)
      throw std::invalid_argument("graph: self loop rejected at node " + std::to_string(a));
    auto e = std::minmax(a, b);
    if (std::find(edges_.begin(), edges_.end(), std::make_pair(e.first, e.second)) != edges_.end())
      continue;  // duplicate edge, keep set semantics
    edges_.emplace_back(e.first, e.second);
    adj_[static_cast<size_t>(e.first)].push_back(e.second);
    adj_[static_cast<size_t>(e.second)].push_back(e.first);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(int i, int j) const {
  if (i == j) return false;
  const auto& nb = adj_.at(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  return Graph(n, edges);
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, edges);
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

bool is_connected(const Graph& g) {
  const int n = g.n_nodes();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : g.neighbors(v)) {
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = 1;
        ++count;
        q.push(w);
      }
    }
  }
  return count == n;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> adjacency_and_laplacian(const Graph& g) {
  const int n = g.n_nodes();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : g.edges()) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  Eigen::MatrixXd l = -a;
  for (int i = 0; i < n; ++i) l(i, i) = static_cast<double>(g.degree(i));
  return {a, l};
}

SpectralSummary spectral_summary(const Graph& g) {
  if (!is_connected(g))
    throw std::invalid_argument("spectral_summary: graph must be connected");
  auto [a, l] = adjacency_and_laplacian(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_summary: eigendecomposition failed");
  const int n = g.n_nodes();

  SpectralSummary s;
  s.lambda_max = es.eigenvalues()(n - 1);
  s.v_plus = es.eigenvectors().col(n - 1);
  s.lambda_min = es.eigenvalues()(0);
  s.v_minus = es.eigenvectors().col(0);

  // Fix signs deterministically: first nonzero entry positive.
  auto fix_sign = [](Eigen::VectorXd& v) {
    for (int i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
  };
  fix_sign(s.v_plus);
  fix_sign(s.v_minus);

  // Perron vector of a connected graph must be strictly positive.
  if (n > 1 && (s.v_plus.array() <= 0.0).any())
    throw std::runtime_error("spectral_summary: Perron eigenvector not strictly positive");
  s.v_plus.normalize();
  s.v_minus.normalize();
  return s;
}

std::vector<Eigen::VectorXd> min_eigenspace(const Graph& g, double tol) {
  if (!is_connected(g))
    throw std::invalid_argument("min_eigenspace: graph must be connected");
  auto [a, l] = adjacency_and_laplacian(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const double lo = es.eigenvalues()(0);
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < g.n_nodes(); ++i) {
    if (es.eigenvalues()(i) - lo <= tol) {
      Eigen::VectorXd v = es.eigenvectors().col(i);
      for (int k = 0; k < v.size(); ++k) {
        if (std::abs(v(k)) > 1e-12) {
          if (v(k) < 0) v = -v;
          break;
        }
      }
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace cbpa::graph
