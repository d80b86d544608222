#include "fa/data_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fa {
namespace {

std::runtime_error line_error(const std::string& path, int line_no,
                              const std::string& what) {
  return std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_edge_list: cannot open " + path);
  std::vector<std::pair<int, int>> pairs;
  int declared_n = -1;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "n") {
      if (!(fields >> declared_n) || declared_n < 1) {
        throw line_error(path, line_no, "bad node-count header");
      }
      continue;
    }
    int a = 0, b = 0;
    try {
      a = std::stoi(first);
    } catch (const std::exception&) {
      throw line_error(path, line_no, "bad edge endpoint");
    }
    if (!(fields >> b)) throw line_error(path, line_no, "missing endpoint");
    pairs.emplace_back(a, b);
    max_index = std::max({max_index, a, b});
  }
  int n = declared_n > 0 ? declared_n : max_index + 1;
  if (n < 1) throw std::runtime_error("read_edge_list: empty graph in " + path);
  return build_graph(pairs, n);
}

void write_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_edge_list: cannot open " + path);
  out << "n " << g.node_count << "\n";
  for (const auto& [u, v] : g.edges) out << u << " " << v << "\n";
}

Eigen::MatrixXd read_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_features_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& f : split_fields(line, ',')) {
      try {
        row.push_back(std::stod(f));
      } catch (const std::exception&) {
        throw line_error(path, line_no, "bad number '" + f + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw line_error(path, line_no, "ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("read_features_csv: empty " + path);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_features_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_features_csv: cannot open " + path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
}

std::vector<int> read_labels_csv(const std::string& path, int node_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_labels_csv: cannot open " + path);
  std::vector<int> labels(node_count, -1);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_fields(line, ',');
    if (fields.size() != 2) throw line_error(path, line_no, "want node,class");
    int node = std::stoi(fields[0]);
    if (node < 0 || node >= node_count) {
      throw line_error(path, line_no, "node index out of range");
    }
    labels[node] = std::stoi(fields[1]);
  }
  for (int i = 0; i < node_count; ++i) {
    if (labels[i] < 0) {
      throw std::runtime_error("read_labels_csv: node " + std::to_string(i) +
                               " has no label in " + path);
    }
  }
  return labels;
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_labels_csv: cannot open " + path);
  for (size_t i = 0; i < labels.size(); ++i) out << i << "," << labels[i] << "\n";
}

Split read_masks_csv(const std::string& path, int node_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_masks_csv: cannot open " + path);
  Split split;
  split.train.assign(node_count, 0);
  split.val.assign(node_count, 0);
  split.test.assign(node_count, 0);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_fields(line, ',');
    if (fields.size() != 2) throw line_error(path, line_no, "want node,set");
    int node = std::stoi(fields[0]);
    if (node < 0 || node >= node_count) {
      throw line_error(path, line_no, "node index out of range");
    }
    if (fields[1] == "train") split.train[node] = 1;
    else if (fields[1] == "val") split.val[node] = 1;
    else if (fields[1] == "test") split.test[node] = 1;
    else throw line_error(path, line_no, "unknown set '" + fields[1] + "'");
  }
  return split;
}

void write_masks_csv(const std::string& path, const Split& split) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_masks_csv: cannot open " + path);
  for (size_t i = 0; i < split.train.size(); ++i) {
    if (split.train[i]) out << i << ",train\n";
    else if (split.val[i]) out << i << ",val\n";
    else if (split.test[i]) out << i << ",test\n";
  }
}

Split stratified_split(const std::vector<int>& labels, double train_ratio,
                       double val_ratio, std::uint64_t seed) {
  const int n = static_cast<int>(labels.size());
  const int train_total = static_cast<int>(train_ratio * n);
  const int val_total = static_cast<int>(val_ratio * n);

  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  for (auto& [cls, nodes] : by_class) std::shuffle(nodes.begin(), nodes.end(), rng);

  // Largest-remainder apportionment so global sizes are exact and per-class
  // counts stay within one node of proportionality.
  auto apportion = [&](int total, const std::vector<int>& class_sizes) {
    std::vector<int> give(class_sizes.size(), 0);
    std::vector<std::pair<double, size_t>> frac;
    int assigned = 0;
    for (size_t c = 0; c < class_sizes.size(); ++c) {
      double ideal = double(total) * class_sizes[c] / std::accumulate(
          class_sizes.begin(), class_sizes.end(), 0);
      give[c] = static_cast<int>(ideal);
      assigned += give[c];
      frac.emplace_back(ideal - give[c], c);
    }
    std::sort(frac.rbegin(), frac.rend());
    for (int k = 0; assigned < total; ++k, ++assigned) give[frac[k].second] += 1;
    return give;
  };

  std::vector<int> class_sizes;
  std::vector<const std::vector<int>*> class_nodes;
  for (const auto& [cls, nodes] : by_class) {
    class_sizes.push_back(static_cast<int>(nodes.size()));
    class_nodes.push_back(&nodes);
  }
  auto train_counts = apportion(train_total, class_sizes);
  std::vector<int> remaining = class_sizes;
  for (size_t c = 0; c < remaining.size(); ++c) remaining[c] -= train_counts[c];
  auto val_counts = apportion(val_total, remaining);

  Split split;
  split.train.assign(n, 0);
  split.val.assign(n, 0);
  split.test.assign(n, 0);
  for (size_t c = 0; c < class_nodes.size(); ++c) {
    const auto& nodes = *class_nodes[c];
    int i = 0;
    for (; i < train_counts[c]; ++i) split.train[nodes[i]] = 1;
    for (; i < train_counts[c] + val_counts[c]; ++i) split.val[nodes[i]] = 1;
    for (; i < static_cast<int>(nodes.size()); ++i) split.test[nodes[i]] = 1;
  }
  return split;
}

Dataset load_citation(const std::string& content_path,
                      const std::string& cites_path) {
  std::ifstream content(content_path);
  if (!content) {
    throw std::runtime_error("load_citation: cannot open " + content_path);
  }
  std::map<std::string, int> index_of;
  std::vector<std::vector<double>> feature_rows;
  std::vector<std::string> label_names;
  std::map<std::string, int> label_id;
  std::vector<int> labels;
  std::string line;
  int line_no = 0;
  while (std::getline(content, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (fields >> tok) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() < 3) {
      throw line_error(content_path, line_no, "want id, features..., label");
    }
    const std::string& id = tokens.front();
    if (index_of.count(id)) {
      throw line_error(content_path, line_no, "duplicate id " + id);
    }
    index_of[id] = static_cast<int>(feature_rows.size());
    std::vector<double> row;
    for (size_t i = 1; i + 1 < tokens.size(); ++i) {
      try {
        row.push_back(std::stod(tokens[i]));
      } catch (const std::exception&) {
        throw line_error(content_path, line_no, "bad feature value");
      }
    }
    if (!feature_rows.empty() && row.size() != feature_rows.front().size()) {
      throw line_error(content_path, line_no, "inconsistent feature width");
    }
    feature_rows.push_back(std::move(row));
    const std::string& cls = tokens.back();
    auto [it, inserted] =
        label_id.emplace(cls, static_cast<int>(label_id.size()));
    if (inserted) label_names.push_back(cls);
    labels.push_back(it->second);
  }
  const int n = static_cast<int>(feature_rows.size());
  if (n == 0) throw std::runtime_error("load_citation: empty content file");

  std::ifstream cites(cites_path);
  if (!cites) {
    throw std::runtime_error("load_citation: cannot open " + cites_path);
  }
  std::vector<std::pair<int, int>> pairs;
  int dropped = 0;
  int directed_entries = 0;
  line_no = 0;
  while (std::getline(cites, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string cited, citing;
    if (!(fields >> cited)) continue;
    if (!(fields >> citing)) {
      throw line_error(cites_path, line_no, "want cited citing");
    }
    ++directed_entries;
    auto a = index_of.find(cited);
    auto b = index_of.find(citing);
    if (a == index_of.end() || b == index_of.end()) {
      ++dropped;
      continue;
    }
    pairs.emplace_back(a->second, b->second);
  }

  Dataset ds;
  ds.graph = build_graph(pairs, n);
  Eigen::MatrixXd features(n, feature_rows.front().size());
  for (int i = 0; i < n; ++i) {
    for (size_t j = 0; j < feature_rows[i].size(); ++j) {
      features(i, j) = feature_rows[i][j];
    }
  }
  ds.graph.features = std::move(features);
  ds.graph.labels = labels;
  ds.provenance_notes.push_back("citation ids mapped to dense indices");
  ds.provenance_notes.push_back(
      "directed citation entries: " + std::to_string(directed_entries) +
      ", undirected edges after symmetrization/dedup: " +
      std::to_string(ds.graph.edge_count()));
  if (dropped > 0) {
    ds.provenance_notes.push_back(
        "citations referencing unknown ids dropped: " + std::to_string(dropped));
  }

  // Planted split in file order: first 20 per class train, next 500
  // unassigned nodes val, next 1000 test.
  ds.split.train.assign(n, 0);
  ds.split.val.assign(n, 0);
  ds.split.test.assign(n, 0);
  std::map<int, int> taken;
  for (int i = 0; i < n; ++i) {
    if (taken[labels[i]] < 20) {
      ds.split.train[i] = 1;
      ++taken[labels[i]];
    }
  }
  int val_left = 500, test_left = 1000;
  for (int i = 0; i < n; ++i) {
    if (ds.split.train[i]) continue;
    if (val_left > 0) {
      ds.split.val[i] = 1;
      --val_left;
    } else if (test_left > 0) {
      ds.split.test[i] = 1;
      --test_left;
    }
  }
  ds.provenance_notes.push_back(
      "planted split: 20 per class train, 500 val, 1000 test (file order)");
  return ds;
}

Dataset preprocess_polblogs(const std::string& edge_path,
                            const std::string& community_path) {
  std::ifstream comm(community_path);
  if (!comm) {
    throw std::runtime_error("preprocess_polblogs: cannot open " +
                             community_path);
  }
  std::map<int, int> community_of;
  std::map<int, int> community_size;
  std::string line;
  int line_no = 0;
  while (std::getline(comm, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream fields(line);
    int node = 0, community = 0;
    if (!(fields >> node)) continue;
    if (!(fields >> community)) {
      throw line_error(community_path, line_no, "want node community");
    }
    community_of[node] = community;
    ++community_size[community];
  }

  Graph raw = read_edge_list(edge_path);

  // Drop nodes in singleton communities (and nodes with no community line).
  std::vector<int> remap(raw.node_count, -1);
  std::vector<int> labels;
  std::map<int, int> class_id;
  int kept = 0;
  int removed = 0;
  for (int v = 0; v < raw.node_count; ++v) {
    auto it = community_of.find(v);
    if (it == community_of.end() || community_size[it->second] <= 1) {
      ++removed;
      continue;
    }
    remap[v] = kept++;
    auto [cls, inserted] =
        class_id.emplace(it->second, static_cast<int>(class_id.size()));
    labels.push_back(cls->second);
  }
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [u, v] : raw.edges) {
    if (remap[u] != -1 && remap[v] != -1) {
      pairs.emplace_back(remap[u], remap[v]);
    }
  }

  Dataset ds;
  ds.name = "polblogs";
  ds.graph = build_graph(pairs, kept);
  ds.graph.features = Eigen::MatrixXd::Identity(kept, kept);
  ds.graph.labels = std::move(labels);
  ds.provenance_notes.push_back("directed edges symmetrized on load");
  ds.provenance_notes.push_back(
      "nodes removed (singleton community or unlabeled): " +
      std::to_string(removed));
  ds.provenance_notes.push_back("nodes kept: " + std::to_string(kept) +
                                ", classes: " +
                                std::to_string(class_id.size()));
  ds.provenance_notes.push_back("features set to the " + std::to_string(kept) +
                                "x" + std::to_string(kept) + " identity");
  return ds;
}

Dataset load_generic(const std::string& edge_path,
                     const std::string& features_path,
                     const std::string& labels_path,
                     const std::string& split_spec) {
  Dataset ds;
  ds.graph = read_edge_list(edge_path);
  if (!features_path.empty()) {
    Eigen::MatrixXd f = read_features_csv(features_path);
    if (f.rows() != ds.graph.node_count) {
      throw std::runtime_error("load_generic: feature row count " +
                               std::to_string(f.rows()) +
                               " != node count " +
                               std::to_string(ds.graph.node_count));
    }
    ds.graph.features = std::move(f);
  }
  if (!labels_path.empty()) {
    ds.graph.labels = read_labels_csv(labels_path, ds.graph.node_count);
  }
  if (!split_spec.empty()) {
    if (split_spec.rfind("ratios:", 0) == 0) {
      if (!ds.graph.labels) {
        throw std::runtime_error(
            "load_generic: stratified split requested without labels");
      }
      auto body = split_spec.substr(7);
      auto colon = body.find(':');
      std::uint64_t seed = 0;
      if (colon != std::string::npos) {
        seed = std::stoull(body.substr(colon + 1));
        body = body.substr(0, colon);
      }
      auto parts = split_fields(body, ',');
      if (parts.size() != 3) {
        throw std::runtime_error(
            "load_generic: split spec wants ratios:t,v,s[:seed]");
      }
      ds.split = stratified_split(*ds.graph.labels, std::stod(parts[0]),
                                  std::stod(parts[1]), seed);
      ds.provenance_notes.push_back("stratified split " + split_spec);
    } else {
      ds.split = read_masks_csv(split_spec, ds.graph.node_count);
      ds.provenance_notes.push_back("split read from " + split_spec);
    }
  }
  return ds;
}

}  // namespace fa
