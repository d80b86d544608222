// Batch front end: spectral analysis, GCN depth sweeps, synthetic dataset
// generation and energy reports, all emitting JSON/CSV with an embedded run
// manifest.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fa/data_io.hpp"
#include "fa/energy.hpp"
#include "fa/gcn.hpp"
#include "fa/graph.hpp"
#include "fa/spectral.hpp"
#include "fa/synth.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string utc_timestamp() {
  if (const char* env = std::getenv("FA_TIMESTAMP")) return env;
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing";
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct CommonArgs {
  std::string edges, features, labels, format = "generic";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string depths_arg = "2,3,4,5";
  int repeats = 5;
  std::string config_path;
  std::string timestamp;
};

nlohmann::json make_manifest(const std::string& command, const CommonArgs& a,
                             const nlohmann::json& config_snapshot) {
  nlohmann::json digests = nlohmann::json::object();
  for (const auto& p : {a.edges, a.features, a.labels, a.config_path}) {
    if (!p.empty()) digests[p] = file_digest(p);
  }
  return {{"command", command},
          {"config", config_snapshot},
          {"input_digests", digests},
          {"tool_version", kToolVersion},
          {"seed", a.seed},
          {"timestamp", a.timestamp.empty() ? utc_timestamp() : a.timestamp}};
}

std::vector<int> parse_depths(const std::string& arg) {
  std::vector<int> depths;
  std::string field;
  std::istringstream in(arg);
  while (std::getline(in, field, ',')) {
    if (!field.empty()) depths.push_back(std::stoi(field));
  }
  return depths;
}

fa::Dataset load_dataset(const CommonArgs& a) {
  if (a.format == "citation") {
    // --features carries the .content file, --edges the .cites file.
    return fa::load_citation(a.features, a.edges);
  }
  if (a.format == "polblogs") {
    fa::Dataset ds = fa::preprocess_polblogs(a.edges, a.labels);
    ds.split = fa::stratified_split(*ds.graph.labels, 0.6, 0.2, a.seed);
    ds.provenance_notes.push_back("stratified 60/20/20 split, seed " +
                                  std::to_string(a.seed));
    return ds;
  }
  if (a.format == "generic") {
    std::string split_spec;
    if (!a.labels.empty()) {
      split_spec = "ratios:0.6,0.2,0.2:" + std::to_string(a.seed);
    }
    return fa::load_generic(a.edges, a.features, a.labels, split_spec);
  }
  throw CLI::ValidationError("--format", "unknown format " + a.format);
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

int cmd_analyze(const CommonArgs& a) {
  fa::Dataset ds;
  try {
    ds = load_dataset(a);
  } catch (const std::exception& e) {
    std::cerr << "load failed: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    fa::SpectralSummary summary = fa::component_fiedler_summary(ds.graph);
    double lambda2_ref = summary.weighted_average_fiedler;
    nlohmann::json report;
    report["spectral_summary"] = fa::to_json(summary);
    if (lambda2_ref > 0.0) {
      fa::BoundsReport bounds = fa::spectral_bounds(
          summary.node_count, lambda2_ref, summary.max_degree);
      report["bounds"] = fa::to_json(bounds);
      report["depth_advice"] =
          fa::to_json(fa::depth_advice(summary, bounds,
                                       parse_depths(a.depths_arg)));
    } else {
      report["bounds"] = nullptr;
      report["depth_advice"] = nullptr;
    }
    report["provenance_notes"] = ds.provenance_notes;
    report["manifest"] = make_manifest("analyze", a, nlohmann::json::object());
    std::filesystem::create_directories(a.out_dir);
    write_json(std::filesystem::path(a.out_dir) / "analyze_report.json", report);
    std::cout << report["spectral_summary"].dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "analysis failed: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int cmd_sweep(const CommonArgs& a) {
  fa::Dataset ds;
  std::vector<int> depths = parse_depths(a.depths_arg);
  for (int d : depths) {
    if (d < 1) {
      std::cerr << "invalid depth " << d << "\n";
      return kExitUsage;
    }
  }
  if (depths.empty() || a.repeats < 1) {
    std::cerr << "need at least one depth and one repeat\n";
    return kExitUsage;
  }
  try {
    ds = load_dataset(a);
    if (!ds.graph.labels) throw std::runtime_error("dataset has no labels");
  } catch (const std::exception& e) {
    std::cerr << "load failed: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    fa::TrainConfig cfg;
    if (!a.config_path.empty()) cfg = fa::parse_train_config(a.config_path);
    cfg.seed = a.seed;
    fa::SweepResult result =
        fa::depth_sweep(ds.graph, depths, cfg, a.repeats, ds.split);

    std::filesystem::create_directories(a.out_dir);
    write_text(std::filesystem::path(a.out_dir) / "sweep_runs.csv",
               fa::sweep_csv(result));

    nlohmann::json per_depth = nlohmann::json::array();
    for (const auto& d : result.per_depth) {
      per_depth.push_back({{"depth", d.depth},
                           {"mean_accuracy", d.mean_accuracy},
                           {"stddev_accuracy", d.stddev_accuracy}});
    }
    nlohmann::json config_snapshot = {
        {"hidden_dim", cfg.hidden_dim},
        {"learning_rate", cfg.learning_rate},
        {"weight_decay", cfg.weight_decay},
        {"dropout_rate", cfg.dropout_rate},
        {"max_epochs", cfg.max_epochs},
        {"patience", cfg.patience},
        {"depths", depths},
        {"repeats", a.repeats}};
    nlohmann::json report = {
        {"per_depth", per_depth},
        {"provenance_notes", ds.provenance_notes},
        {"manifest", make_manifest("sweep", a, config_snapshot)}};
    write_json(std::filesystem::path(a.out_dir) / "sweep_summary.json", report);
    std::cout << report["per_depth"].dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "sweep failed: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int cmd_synth(const CommonArgs& a, const fa::SyntheticSpec& spec) {
  try {
    fa::Graph g = fa::generate(spec);
    std::filesystem::create_directories(a.out_dir);
    auto dir = std::filesystem::path(a.out_dir);
    fa::write_edge_list((dir / "edges.txt").string(), g);
    fa::write_features_csv((dir / "features.csv").string(), *g.features);
    fa::write_labels_csv((dir / "labels.csv").string(), *g.labels);
    nlohmann::json config_snapshot = {
        {"node_count", spec.node_count},
        {"feature_dim", spec.feature_dim},
        {"target_edge_count", spec.target_edge_count},
        {"intra_class_edge_fraction", spec.intra_class_edge_fraction}};
    CommonArgs manifest_args = a;
    manifest_args.seed = spec.seed;
    write_json(dir / "manifest.json",
               make_manifest("synth", manifest_args, config_snapshot));
    std::cout << "wrote " << g.node_count << " nodes, " << g.edge_count()
              << " edges to " << a.out_dir << "\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "infeasible spec: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int cmd_energy(const CommonArgs& a) {
  fa::Dataset ds;
  try {
    ds = load_dataset(a);
    if (!ds.graph.features) throw std::runtime_error("dataset has no features");
  } catch (const std::exception& e) {
    std::cerr << "load failed: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    fa::SpectralSummary summary = fa::component_fiedler_summary(ds.graph);
    double lambda2_ref = summary.weighted_average_fiedler;
    if (lambda2_ref <= 0.0) {
      std::cerr << "energy: reference Fiedler value is zero (edgeless graph)\n";
      return kExitNumerical;
    }
    Eigen::MatrixXd lap = fa::laplacian(ds.graph);
    const Eigen::MatrixXd& raw = *ds.graph.features;

    fa::EnergyReport raw_report;
    raw_report.dirichlet_energy = fa::dirichlet_energy(lap, raw);
    raw_report.fiedler_bound =
        fa::fiedler_bound(ds.graph.node_count, lambda2_ref);
    raw_report.rho = fa::rho_score(lap, lambda2_ref, raw);
    raw_report.total_feature_norm = raw.squaredNorm();
    raw_report.centered = false;

    nlohmann::json report;
    report["rho_convention_raw"] = fa::to_json(raw_report);

    Eigen::MatrixXd centered = fa::center_features(raw);
    if (centered.squaredNorm() > 0.0) {
      Eigen::MatrixXd normalized = fa::normalize_total_energy(centered);
      fa::EnergyReport norm_report;
      norm_report.dirichlet_energy = fa::dirichlet_energy(lap, normalized);
      norm_report.fiedler_bound = raw_report.fiedler_bound;
      norm_report.rho = fa::rho_score(lap, lambda2_ref, normalized);
      norm_report.total_feature_norm = normalized.squaredNorm();
      norm_report.centered = true;
      report["rho_convention_centered_normalized"] = fa::to_json(norm_report);
    } else {
      // Constant features center to zero; rho is 0 by convention.
      fa::EnergyReport zero_report;
      zero_report.fiedler_bound = raw_report.fiedler_bound;
      zero_report.centered = true;
      report["rho_convention_centered_normalized"] = fa::to_json(zero_report);
    }
    report["lambda2_ref"] = lambda2_ref;
    report["lambda2_ref_note"] =
        "weighted-average Fiedler value over components";
    report["manifest"] = make_manifest("energy", a, nlohmann::json::object());
    std::filesystem::create_directories(a.out_dir);
    write_json(std::filesystem::path(a.out_dir) / "energy_report.json", report);
    std::cout << report.dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "energy computation failed: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fiedler-value diagnostics and GCN depth sweeps"};
  app.require_subcommand(1);

  CommonArgs args;
  fa::SyntheticSpec spec;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--edges", args.edges, "edge-list file");
    cmd->add_option("--features", args.features,
                    "features CSV (or .content file for --format citation)");
    cmd->add_option("--labels", args.labels,
                    "labels CSV (or community file for --format polblogs)");
    cmd->add_option("--format", args.format, "generic|citation|polblogs");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "base seed");
    cmd->add_option("--depths", args.depths_arg, "comma-separated depth list");
    cmd->add_option("--repeats", args.repeats, "repeats per depth");
    cmd->add_option("--config", args.config_path, "train config file");
    cmd->add_option("--timestamp", args.timestamp,
                    "fixed manifest timestamp (default: current UTC)");
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "spectral summary, bounds and depth advice");
  add_common(analyze);
  CLI::App* sweep = app.add_subcommand("sweep", "GCN depth sweep");
  add_common(sweep);
  CLI::App* energy = app.add_subcommand("energy", "Dirichlet energy report");
  add_common(energy);
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  add_common(synth);
  synth->add_option("--nodes", spec.node_count, "node count");
  synth->add_option("--feature-dim", spec.feature_dim, "feature dimension");
  synth->add_option("--synth-edges", spec.target_edge_count, "edge count");
  synth->add_option("--intra-fraction", spec.intra_class_edge_fraction,
                    "expected intra-class edge fraction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(args);
    if (sweep->parsed()) return cmd_sweep(args);
    if (energy->parsed()) return cmd_energy(args);
    if (synth->parsed()) {
      spec.seed = args.seed;
      return cmd_synth(args, spec);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
