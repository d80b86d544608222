#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "fa/data_io.hpp"
#include "fa/synth.hpp"

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fa_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

}  // namespace

TEST_CASE("edge list: header, comments, inference") {
  TempDir dir;
  write(dir.file("a.txt"), "# comment\nn 5\n0 1\n1 2 # trailing\n");
  fa::Graph a = fa::read_edge_list(dir.file("a.txt"));
  CHECK(a.node_count == 5);
  CHECK(a.edge_count() == 2);

  write(dir.file("b.txt"), "0 1\n3 2\n");
  fa::Graph b = fa::read_edge_list(dir.file("b.txt"));
  CHECK(b.node_count == 4);

  write(dir.file("c.txt"), "0 x\n");
  CHECK_THROWS(fa::read_edge_list(dir.file("c.txt")));
}

TEST_CASE("edge list round trip") {
  TempDir dir;
  fa::Graph g = fa::build_graph({{0, 3}, {1, 2}, {2, 3}}, 6);
  fa::write_edge_list(dir.file("g.txt"), g);
  fa::Graph back = fa::read_edge_list(dir.file("g.txt"));
  CHECK(back.node_count == 6);
  CHECK(back.edges == g.edges);
}

TEST_CASE("features CSV round trip preserves values bit-exactly") {
  TempDir dir;
  Eigen::MatrixXd m(2, 3);
  m << 1.5, -2.25, 1.0 / 3.0, 0.0, 1e-17, 123456.789;
  fa::write_features_csv(dir.file("f.csv"), m);
  Eigen::MatrixXd back = fa::read_features_csv(dir.file("f.csv"));
  CHECK(back.isApprox(m, 0.0));

  write(dir.file("ragged.csv"), "1,2\n3\n");
  CHECK_THROWS(fa::read_features_csv(dir.file("ragged.csv")));
}

TEST_CASE("labels CSV round trip and validation") {
  TempDir dir;
  std::vector<int> labels{2, 0, 1};
  fa::write_labels_csv(dir.file("l.csv"), labels);
  CHECK(fa::read_labels_csv(dir.file("l.csv"), 3) == labels);

  write(dir.file("short.csv"), "0,1\n");
  CHECK_THROWS(fa::read_labels_csv(dir.file("short.csv"), 2));
}

TEST_CASE("masks CSV round trip") {
  TempDir dir;
  fa::Split split;
  split.train = {1, 0, 0, 0};
  split.val = {0, 1, 0, 0};
  split.test = {0, 0, 1, 0};
  fa::write_masks_csv(dir.file("m.csv"), split);
  fa::Split back = fa::read_masks_csv(dir.file("m.csv"), 4);
  CHECK(back.train == split.train);
  CHECK(back.val == split.val);
  CHECK(back.test == split.test);
}

TEST_CASE("stratified split sizes and per-class balance") {
  std::vector<int> labels;
  for (int i = 0; i < 100; ++i) labels.push_back(i % 4);
  fa::Split split = fa::stratified_split(labels, 0.6, 0.2, 1);
  auto count = [](const std::vector<std::uint8_t>& mask) {
    int c = 0;
    for (auto m : mask) c += m;
    return c;
  };
  CHECK(count(split.train) == 60);
  CHECK(count(split.val) == 20);
  CHECK(count(split.test) == 20);
  for (int cls = 0; cls < 4; ++cls) {
    int train_c = 0;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls && split.train[i]) ++train_c;
    }
    CHECK(std::abs(train_c - 15) <= 1);
  }
  // disjoint, exhaustive
  for (size_t i = 0; i < labels.size(); ++i) {
    CHECK(split.train[i] + split.val[i] + split.test[i] == 1);
  }
}

TEST_CASE("citation loader on a toy fixture with a dangling citation") {
  TempDir dir;
  write(dir.file("toy.content"),
        "paperA\t1\t0\t1\tml\n"
        "paperB\t0\t1\t0\tdb\n"
        "paperC\t1\t1\t0\tml\n");
  write(dir.file("toy.cites"),
        "paperA\tpaperB\n"
        "paperB\tpaperC\n"
        "paperX\tpaperA\n");
  fa::Dataset ds = fa::load_citation(dir.file("toy.content"),
                                     dir.file("toy.cites"));
  CHECK(ds.graph.node_count == 3);
  CHECK(ds.graph.features->cols() == 3);
  CHECK(ds.graph.edge_count() == 2);
  CHECK((*ds.graph.labels)[0] == (*ds.graph.labels)[2]);
  CHECK((*ds.graph.labels)[0] != (*ds.graph.labels)[1]);
  bool noted = false;
  for (const auto& note : ds.provenance_notes) {
    if (note.find("dropped: 1") != std::string::npos) noted = true;
  }
  CHECK(noted);

  write(dir.file("bad.content"), "justone 1\n");
  CHECK_THROWS(fa::load_citation(dir.file("bad.content"),
                                 dir.file("toy.cites")));
}

TEST_CASE("polblogs preprocessing drops singleton communities") {
  TempDir dir;
  // 10 nodes, community 9 has a single member (node 9)
  std::string comm;
  for (int i = 0; i < 9; ++i) comm += std::to_string(i) + " " +
                                      std::to_string(i % 3) + "\n";
  comm += "9 7\n";
  write(dir.file("comm.txt"), comm);
  std::string edges = "n 10\n";
  for (int i = 0; i + 1 < 10; ++i)
    edges += std::to_string(i) + " " + std::to_string(i + 1) + "\n";
  write(dir.file("edges.txt"), edges);

  fa::Dataset ds = fa::preprocess_polblogs(dir.file("edges.txt"),
                                           dir.file("comm.txt"));
  CHECK(ds.graph.node_count == 9);
  CHECK(ds.graph.features->rows() == 9);
  CHECK(ds.graph.features->isApprox(Eigen::MatrixXd::Identity(9, 9), 0.0));
  CHECK(ds.graph.edge_count() == 8);  // the 8-9 edge went with node 9
  int classes = 1 + *std::max_element(ds.graph.labels->begin(),
                                      ds.graph.labels->end());
  CHECK(classes == 3);
}

TEST_CASE("polblogs keeps everything when no community is a singleton") {
  TempDir dir;
  write(dir.file("comm.txt"), "0 0\n1 0\n2 1\n3 1\n");
  write(dir.file("edges.txt"), "0 1\n2 3\n");
  fa::Dataset ds = fa::preprocess_polblogs(dir.file("edges.txt"),
                                           dir.file("comm.txt"));
  CHECK(ds.graph.node_count == 4);
  CHECK(ds.graph.edge_count() == 2);
}

TEST_CASE("synthetic export round-trips through load_generic") {
  TempDir dir;
  fa::SyntheticSpec spec;
  spec.node_count = 40;
  spec.feature_dim = 5;
  spec.target_edge_count = 70;
  spec.seed = 6;
  fa::Graph g = fa::generate(spec);
  fa::write_edge_list(dir.file("edges.txt"), g);
  fa::write_features_csv(dir.file("f.csv"), *g.features);
  fa::write_labels_csv(dir.file("l.csv"), *g.labels);

  fa::Dataset ds = fa::load_generic(dir.file("edges.txt"), dir.file("f.csv"),
                                    dir.file("l.csv"), "ratios:0.6,0.2,0.2:1");
  CHECK(ds.graph.edges == g.edges);
  CHECK(ds.graph.features->isApprox(*g.features, 0.0));
  CHECK(*ds.graph.labels == *g.labels);
  int train = 0;
  for (auto m : ds.split.train) train += m;
  CHECK(train == 24);
}

TEST_CASE("load_generic errors") {
  TempDir dir;
  write(dir.file("edges.txt"), "n 3\n0 1\n");
  write(dir.file("f.csv"), "1,2\n3,4\n");  // 2 rows for 3 nodes
  CHECK_THROWS(fa::load_generic(dir.file("edges.txt"), dir.file("f.csv"), "",
                                ""));
  // stratified split without labels
  write(dir.file("f3.csv"), "1\n2\n3\n");
  CHECK_THROWS(fa::load_generic(dir.file("edges.txt"), dir.file("f3.csv"), "",
                                "ratios:0.6,0.2,0.2:1"));
}
