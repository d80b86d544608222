#ifndef FA_SYNTH_HPP
#define FA_SYNTH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "fa/graph.hpp"

namespace fa {

struct SyntheticSpec {
  int node_count = 500;
  int feature_dim = 100;
  // Per-class (mean, stddev) of the feature Gaussian. The second number is a
  // standard deviation, not a variance.
  std::vector<std::pair<double, double>> class_params = {
      {250.0, 50.0}, {100.0, 90.0}, {400.0, 200.0}};
  int target_edge_count = 1000;
  double intra_class_edge_fraction = 0.8;
  std::uint64_t seed = 0;
};

/// Planted-class graph: balanced labels (round-robin, then seed-shuffled),
/// per-class Gaussian features, and exactly target_edge_count distinct edges
/// with the configured expected intra-class fraction. Bit-reproducible for a
/// fixed spec. Throws std::invalid_argument on an infeasible spec.
Graph generate(const SyntheticSpec& spec);

/// Keeps a uniformly random subset of target_edge_count edges, chosen by a
/// per-edge priority hashed from (seed, edge) so successive removals with the
/// same seed nest. Features and labels are untouched.
Graph remove_edges(const Graph& g, int target_edge_count, std::uint64_t seed);

}  // namespace fa

#endif
