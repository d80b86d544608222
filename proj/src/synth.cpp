#include "fa/synth.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace fa {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t edge_priority(std::uint64_t seed, int u, int v) {
  return splitmix64(seed ^ (std::uint64_t(u) << 32 | std::uint64_t(v)));
}

}  // namespace

Graph generate(const SyntheticSpec& spec) {
  const int n = spec.node_count;
  const int k = static_cast<int>(spec.class_params.size());
  if (n < 1 || spec.feature_dim < 1 || k == 0) {
    throw std::invalid_argument("generate: bad spec dimensions");
  }
  for (const auto& [mean, sd] : spec.class_params) {
    (void)mean;
    if (sd <= 0.0) throw std::invalid_argument("generate: stddev must be > 0");
  }
  if (spec.intra_class_edge_fraction < 0.0 ||
      spec.intra_class_edge_fraction > 1.0) {
    throw std::invalid_argument("generate: intra fraction out of [0,1]");
  }
  const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
  if (spec.target_edge_count < 0 || spec.target_edge_count > max_edges) {
    throw std::invalid_argument("generate: infeasible edge count");
  }

  std::mt19937_64 rng(splitmix64(spec.seed));

  // Balanced labels: round-robin, then a seeded shuffle.
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i % k;
  std::shuffle(labels.begin(), labels.end(), rng);

  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < n; ++i) members[labels[i]].push_back(i);

  Eigen::MatrixXd features(n, spec.feature_dim);
  for (int i = 0; i < n; ++i) {
    auto [mean, sd] = spec.class_params[labels[i]];
    std::normal_distribution<double> gauss(mean, sd);
    for (int j = 0; j < spec.feature_dim; ++j) features(i, j) = gauss(rng);
  }

  // Class choice for intra edges, weighted by the pair count per class.
  std::vector<double> pair_weight(k);
  for (int c = 0; c < k; ++c) {
    double m = static_cast<double>(members[c].size());
    pair_weight[c] = m * (m - 1.0) / 2.0;
  }
  std::discrete_distribution<int> class_pick(pair_weight.begin(),
                                             pair_weight.end());
  std::bernoulli_distribution want_intra(spec.intra_class_edge_fraction);
  std::uniform_int_distribution<int> any_node(0, n - 1);

  std::set<std::pair<int, int>> edges;
  auto try_insert = [&](int a, int b) {
    if (a == b) return false;
    return edges.emplace(std::min(a, b), std::max(a, b)).second;
  };
  auto sample_intra = [&]() {
    const auto& group = members[class_pick(rng)];
    if (group.size() < 2) return false;
    std::uniform_int_distribution<size_t> pick(0, group.size() - 1);
    return try_insert(group[pick(rng)], group[pick(rng)]);
  };
  auto sample_inter = [&]() {
    int a = any_node(rng), b = any_node(rng);
    if (labels[a] == labels[b]) return false;
    return try_insert(a, b);
  };
  auto exhaustive = [&](bool intra_ok, bool inter_ok) {
    std::vector<std::pair<int, int>> candidates;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        bool intra = labels[a] == labels[b];
        if (((intra && intra_ok) || (!intra && inter_ok)) &&
            !edges.count({a, b})) {
          candidates.emplace_back(a, b);
        }
      }
    }
    if (candidates.empty()) return false;
    std::uniform_int_distribution<size_t> pick(0, candidates.size() - 1);
    edges.insert(candidates[pick(rng)]);
    return true;
  };

  while (static_cast<int>(edges.size()) < spec.target_edge_count) {
    bool intra = want_intra(rng);
    bool placed = false;
    for (int attempt = 0; attempt < 256 && !placed; ++attempt) {
      placed = intra ? sample_intra() : sample_inter();
    }
    // Rejection saturates near full density; fall back to enumeration of the
    // requested type, then of the other type.
    if (!placed) placed = exhaustive(intra, !intra) || exhaustive(!intra, intra);
    if (!placed) {
      throw std::invalid_argument("generate: infeasible edge count");
    }
  }

  Graph g = build_graph({edges.begin(), edges.end()}, n);
  g.features = std::move(features);
  g.labels = std::move(labels);
  return g;
}

Graph remove_edges(const Graph& g, int target_edge_count, std::uint64_t seed) {
  if (target_edge_count < 0 || target_edge_count > g.edge_count()) {
    throw std::invalid_argument("remove_edges: target exceeds edge count");
  }
  std::vector<std::pair<int, int>> kept(g.edges);
  std::stable_sort(kept.begin(), kept.end(),
                   [&](const auto& a, const auto& b) {
                     return edge_priority(seed, a.first, a.second) <
                            edge_priority(seed, b.first, b.second);
                   });
  kept.resize(target_edge_count);
  Graph out = build_graph(kept, g.node_count);
  out.features = g.features;
  out.labels = g.labels;
  return out;
}

}  // namespace fa
