#include "fa/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace fa {

Graph build_graph(const std::vector<std::pair<int, int>>& edge_pairs,
                  int node_count) {
  if (node_count < 1) {
    throw std::invalid_argument("build_graph: node_count must be >= 1");
  }
  std::set<std::pair<int, int>> canon;
  for (const auto& [a, b] : edge_pairs) {
    if (a < 0 || b < 0 || a >= node_count || b >= node_count) {
      throw std::out_of_range("build_graph: edge endpoint (" +
                              std::to_string(a) + "," + std::to_string(b) +
                              ") out of range for node_count " +
                              std::to_string(node_count));
    }
    if (a == b) continue;
    canon.emplace(std::min(a, b), std::max(a, b));
  }
  Graph g;
  g.node_count = node_count;
  g.edges.assign(canon.begin(), canon.end());
  return g;
}

std::vector<std::vector<int>> adjacency_list(const Graph& g) {
  std::vector<std::vector<int>> adj(g.node_count);
  for (const auto& [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

std::vector<int> degrees(const Graph& g) {
  std::vector<int> d(g.node_count, 0);
  for (const auto& [u, v] : g.edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

int max_degree(const Graph& g) {
  auto d = degrees(g);
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

Eigen::MatrixXd laplacian(const Graph& g) {
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(g.node_count, g.node_count);
  for (const auto& [u, v] : g.edges) {
    lap(u, u) += 1.0;
    lap(v, v) += 1.0;
    lap(u, v) -= 1.0;
    lap(v, u) -= 1.0;
  }
  return lap;
}

ComponentDecomposition connected_components(const Graph& g) {
  ComponentDecomposition cd;
  cd.component_id.assign(g.node_count, -1);
  auto adj = adjacency_list(g);
  std::queue<int> frontier;
  // Scanning nodes in ascending order yields component ids ordered by
  // smallest contained node index.
  for (int start = 0; start < g.node_count; ++start) {
    if (cd.component_id[start] != -1) continue;
    int id = cd.component_count++;
    int size = 0;
    cd.component_id[start] = id;
    frontier.push(start);
    while (!frontier.empty()) {
      int u = frontier.front();
      frontier.pop();
      ++size;
      for (int v : adj[u]) {
        if (cd.component_id[v] == -1) {
          cd.component_id[v] = id;
          frontier.push(v);
        }
      }
    }
    cd.component_sizes.push_back(size);
  }
  return cd;
}

std::vector<int> bfs_distances(const Graph& g, int source) {
  if (source < 0 || source >= g.node_count) {
    throw std::out_of_range("bfs_distances: source out of range");
  }
  auto adj = adjacency_list(g);
  std::vector<int> dist(g.node_count, kUnreachable);
  dist[source] = 0;
  std::queue<int> frontier;
  frontier.push(source);
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int v : adj[u]) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

Eigen::MatrixXi bfs_all_pairs(const Graph& g) {
  Eigen::MatrixXi d(g.node_count, g.node_count);
  for (int s = 0; s < g.node_count; ++s) {
    auto row = bfs_distances(g, s);
    for (int t = 0; t < g.node_count; ++t) d(s, t) = row[t];
  }
  return d;
}

double mean_distance(const Graph& g) {
  if (g.node_count < 2) {
    throw std::domain_error("mean_distance: needs at least 2 nodes");
  }
  auto d = bfs_all_pairs(g);
  double sum = 0.0;
  for (int i = 0; i < g.node_count; ++i) {
    for (int j = i + 1; j < g.node_count; ++j) {
      if (d(i, j) == kUnreachable) {
        throw std::domain_error("mean_distance: graph is disconnected");
      }
      sum += d(i, j);
    }
  }
  double pairs = 0.5 * g.node_count * (g.node_count - 1);
  return sum / pairs;
}

int diameter(const Graph& g) {
  if (g.node_count < 1) throw std::domain_error("diameter: empty graph");
  int best = 0;
  for (int s = 0; s < g.node_count; ++s) {
    auto dist = bfs_distances(g, s);
    for (int t = 0; t < g.node_count; ++t) {
      if (dist[t] == kUnreachable) {
        throw std::domain_error("diameter: graph is disconnected");
      }
      best = std::max(best, dist[t]);
    }
  }
  return best;
}

Graph component_subgraph(const Graph& g, const ComponentDecomposition& cd,
                         int component) {
  if (component < 0 || component >= cd.component_count) {
    throw std::out_of_range("component_subgraph: bad component id");
  }
  std::vector<int> remap(g.node_count, -1);
  std::vector<int> members;
  for (int v = 0; v < g.node_count; ++v) {
    if (cd.component_id[v] == component) {
      remap[v] = static_cast<int>(members.size());
      members.push_back(v);
    }
  }
  Graph sub;
  sub.node_count = static_cast<int>(members.size());
  for (const auto& [u, v] : g.edges) {
    if (remap[u] != -1 && remap[v] != -1) {
      sub.edges.emplace_back(remap[u], remap[v]);
    }
  }
  std::sort(sub.edges.begin(), sub.edges.end());
  if (g.features) {
    Eigen::MatrixXd f(sub.node_count, g.features->cols());
    for (int i = 0; i < sub.node_count; ++i) f.row(i) = g.features->row(members[i]);
    sub.features = std::move(f);
  }
  if (g.labels) {
    std::vector<int> lab(sub.node_count);
    for (int i = 0; i < sub.node_count; ++i) lab[i] = (*g.labels)[members[i]];
    sub.labels = std::move(lab);
  }
  return sub;
}

}  // namespace fa
