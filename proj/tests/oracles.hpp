// Test-only oracles, independent of the library's computation paths.
#ifndef FA_TESTS_ORACLES_HPP
#define FA_TESTS_ORACLES_HPP

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "fa/graph.hpp"

namespace oracles {

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Floyd-Warshall all-pairs distances.
inline std::vector<std::vector<int>> floyd_warshall(const fa::Graph& g) {
  int n = g.node_count;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& [u, v] : g.edges) d[u][v] = d[v][u] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Edge-sum Dirichlet energy straight from the edge list.
inline double edge_sum_energy(const fa::Graph& g, const Eigen::MatrixXd& v) {
  double total = 0.0;
  for (const auto& [a, b] : g.edges) {
    total += (v.row(a) - v.row(b)).squaredNorm();
  }
  return total;
}

// Reachability check on an explicit adjacency after deleting `removed`.
inline bool connected_without(const fa::Graph& g,
                              const std::vector<int>& removed) {
  std::vector<char> gone(g.node_count, 0);
  for (int r : removed) gone[r] = 1;
  int start = -1, alive = 0;
  for (int i = 0; i < g.node_count; ++i) {
    if (!gone[i]) {
      if (start < 0) start = i;
      ++alive;
    }
  }
  if (alive <= 1) return true;
  auto adj = fa::adjacency_list(g);
  std::vector<char> seen(g.node_count, 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  int reached = 0;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    ++reached;
    for (int v : adj[u]) {
      if (!gone[v] && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return reached == alive;
}

// Brute-force vertex connectivity for small graphs (n <= 12). Returns n-1
// for the complete graph.
inline int vertex_connectivity(const fa::Graph& g) {
  int n = g.node_count;
  for (int k = 0; k <= n - 2; ++k) {
    std::vector<int> subset(k);
    std::vector<int> idx(k);
    // enumerate k-subsets
    std::vector<bool> select(n, false);
    std::fill(select.begin(), select.begin() + k, true);
    std::sort(select.begin(), select.end());  // lexicographic via next_permutation
    do {
      subset.clear();
      for (int i = 0; i < n; ++i)
        if (select[i]) subset.push_back(i);
      if (!connected_without(g, subset)) return k;
    } while (std::next_permutation(select.begin(), select.end()));
  }
  return n - 1;
}

// G(n, p) with a seeded generator.
inline fa::Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  return fa::build_graph(edges, n);
}

// Random connected graph: random spanning tree plus G(n,p) extras.
inline fa::Graph random_connected_graph(int n, double p, std::mt19937_64& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    edges.emplace_back(order[i], order[parent(rng)]);
  }
  std::bernoulli_distribution coin(p);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  return fa::build_graph(edges, n);
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

}  // namespace oracles

#endif
