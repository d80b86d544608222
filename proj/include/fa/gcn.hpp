#ifndef FA_GCN_HPP
#define FA_GCN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fa/graph.hpp"

namespace fa {

struct TrainConfig {
  int depth = 2;
  int hidden_dim = 16;
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  double dropout_rate = 0.5;
  int max_epochs = 200;
  int patience = 10;
  std::uint64_t seed = 0;
};

/// Parses a flat key=value config file; unknown keys are rejected, missing
/// keys keep the documented defaults.
TrainConfig parse_train_config(const std::string& path);

struct Split {
  std::vector<std::uint8_t> train, val, test;  // node masks
};

/// A_hat = D~^{-1/2} (A + I) D~^{-1/2}.
Eigen::MatrixXd normalized_adjacency(const Graph& g);

struct GcnModel {
  std::vector<Eigen::MatrixXd> layer_weights;  // input -> hidden... -> classes
  Eigen::MatrixXd normalized_adjacency;
};

/// Glorot-uniform initialization, deterministic in seed.
GcnModel init_model(const Graph& g, int input_dim, int class_count,
                    const TrainConfig& config);

struct ForwardResult {
  Eigen::MatrixXd logits;
  std::vector<Eigen::MatrixXd> hidden;  // H_1..H_depth (last = logits)
};

/// Hidden layers apply the rectifier; the final layer emits raw scores.
/// Dropout acts on every layer input when active, mask drawn from seed.
ForwardResult forward(const GcnModel& model, const Eigen::MatrixXd& features,
                      bool dropout_active, double dropout_rate,
                      std::uint64_t seed);

struct EpochStat {
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainReport {
  std::vector<EpochStat> per_epoch;
  double test_accuracy = 0.0;
  std::vector<double> rho_trace;     // per layer, best-checkpoint model
  std::vector<double> layer_energy;  // raw Dirichlet energy alongside rho
  int depth = 0;
  std::uint64_t seed = 0;
  int best_epoch = 0;
};

/// Softmax cross-entropy on the train mask with L2 weight decay, Adam
/// updates, early stopping on validation accuracy. Deterministic in seed.
/// lambda2_ref < 0 means "compute the weighted-average Fiedler value here".
TrainReport train(const Graph& g, const TrainConfig& config,
                  const Split& split, double lambda2_ref = -1.0);

/// Max relative error between analytic and central finite-difference
/// gradients (step 1e-5) over every weight entry. Dropout disabled.
double gradient_check(const GcnModel& model, const Eigen::MatrixXd& features,
                      const std::vector<int>& labels,
                      const std::vector<std::uint8_t>& mask,
                      double weight_decay = 0.0);

struct SweepRun {
  int depth = 0;
  int repeat = 0;
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
  int best_epoch = 0;
  std::vector<double> rho_trace;
};

struct DepthStats {
  int depth = 0;
  double mean_accuracy = 0.0;
  double stddev_accuracy = 0.0;
};

struct SweepResult {
  std::vector<SweepRun> runs;        // ordered by (depth, repeat)
  std::vector<DepthStats> per_depth;
};

/// One model per (depth, repeat) with seeds config.seed + repeat. Runs may
/// execute in parallel up to `max_threads` (0 = FA_THREADS env or 1);
/// results are deterministic regardless of scheduling.
SweepResult depth_sweep(const Graph& g, const std::vector<int>& depths,
                        const TrainConfig& config_base, int repeats,
                        const Split& split, int max_threads = 0);

/// CSV columns: depth,repeat,seed,test_accuracy,best_epoch,rho_1..rho_maxdepth
std::string sweep_csv(const SweepResult& result);

}  // namespace fa

#endif
