#ifndef FA_DATA_IO_HPP
#define FA_DATA_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fa/gcn.hpp"
#include "fa/graph.hpp"

namespace fa {

struct Dataset {
  Graph graph;
  Split split;
  std::string name;
  std::vector<std::string> provenance_notes;
};

/// Edge list: one whitespace-separated 0-based index pair per line, `#`
/// comments ignored, optional `n <count>` header; node count inferred as
/// max index + 1 when the header is absent.
Graph read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const Graph& g);

/// Headerless CSV of reals, one row per node.
Eigen::MatrixXd read_features_csv(const std::string& path);
void write_features_csv(const std::string& path, const Eigen::MatrixXd& m);

/// CSV lines: node_index,class.
std::vector<int> read_labels_csv(const std::string& path, int node_count);
void write_labels_csv(const std::string& path, const std::vector<int>& labels);

/// CSV lines: node_index,{train|val|test}.
Split read_masks_csv(const std::string& path, int node_count);
void write_masks_csv(const std::string& path, const Split& split);

/// Seeded stratified split; global sizes floor(r1*n)/floor(r2*n)/remainder
/// with per-class proportions within one node of the ratios.
Split stratified_split(const std::vector<int>& labels, double train_ratio,
                       double val_ratio, std::uint64_t seed);

/// Cora/CiteSeer style loader. Content lines: id, 0/1 features..., label.
/// Cites lines: cited_id citing_id. Unknown ids are dropped and counted in
/// provenance_notes; the planted split (20 per class train, next 500 val,
/// next 1000 test, in file order) is attached.
Dataset load_citation(const std::string& content_path,
                      const std::string& cites_path);

/// PolBlogs loader: edge file plus `node_id community_id` lines. Singleton
/// communities are removed, labels renumbered, features set to the identity.
/// No split is attached (callers use stratified_split).
Dataset preprocess_polblogs(const std::string& edge_path,
                            const std::string& community_path);

/// Generic assembly from the on-disk formats above. split_spec is either a
/// mask-file path or "ratios:<train>,<val>,<test>:<seed>".
Dataset load_generic(const std::string& edge_path,
                     const std::string& features_path,
                     const std::string& labels_path,
                     const std::string& split_spec);

}  // namespace fa

#endif
