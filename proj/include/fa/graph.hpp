#ifndef FA_GRAPH_HPP
#define FA_GRAPH_HPP

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fa {

/// Undirected simple graph. Edges are stored canonically as (u,v) with
/// u < v, sorted ascending; self-loops and duplicates never appear.
struct Graph {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
  std::optional<Eigen::MatrixXd> features;  // node_count x feature_dim
  std::optional<std::vector<int>> labels;   // one class id per node

  int edge_count() const { return static_cast<int>(edges.size()); }
};

struct ComponentDecomposition {
  std::vector<int> component_id;    // per node, ids ordered by smallest member
  std::vector<int> component_sizes;
  int component_count = 0;
};

/// Sentinel for unreachable pairs in distance matrices.
inline constexpr int kUnreachable = -1;

/// Symmetrizes, deduplicates and drops self-loops. Isolated nodes are kept.
/// Throws std::out_of_range if an endpoint >= node_count.
Graph build_graph(const std::vector<std::pair<int, int>>& edge_pairs,
                  int node_count);

std::vector<std::vector<int>> adjacency_list(const Graph& g);

std::vector<int> degrees(const Graph& g);
int max_degree(const Graph& g);

/// Combinatorial Laplacian L = D - A (dense).
Eigen::MatrixXd laplacian(const Graph& g);

ComponentDecomposition connected_components(const Graph& g);

/// All-pairs shortest path lengths by BFS; kUnreachable marks disconnected
/// pairs.
Eigen::MatrixXi bfs_all_pairs(const Graph& g);

/// Single-source BFS distances (kUnreachable where not reached).
std::vector<int> bfs_distances(const Graph& g, int source);

/// Mean shortest-path distance over unordered distinct pairs.
/// Throws std::domain_error on disconnected input.
double mean_distance(const Graph& g);

/// Longest shortest path. Throws std::domain_error on disconnected input.
int diameter(const Graph& g);

/// Node-induced subgraph of one component, nodes renumbered in ascending
/// original order. Features/labels are carried along when present.
Graph component_subgraph(const Graph& g, const ComponentDecomposition& cd,
                         int component);

}  // namespace fa

#endif
