#include "fa/gcn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fa/energy.hpp"
#include "fa/spectral.hpp"

namespace fa {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(1.0 - rate);
  Eigen::MatrixXd mask(rows, cols);
  const double scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      mask(i, j) = keep(rng) ? scale : 0.0;
    }
  }
  return mask;
}

struct ForwardCache {
  std::vector<Eigen::MatrixXd> propagated;  // A_hat * dropped input, per layer
  std::vector<Eigen::MatrixXd> preact;      // Z_l per layer
  std::vector<Eigen::MatrixXd> masks;       // dropout masks (empty if off)
};

ForwardResult forward_impl(const GcnModel& model, const Eigen::MatrixXd& X,
                           bool dropout_active, double dropout_rate,
                           std::uint64_t seed, ForwardCache* cache) {
  const int depth = static_cast<int>(model.layer_weights.size());
  if (X.cols() != model.layer_weights.front().rows()) {
    throw std::invalid_argument("forward: feature width does not match W0");
  }
  ForwardResult out;
  Eigen::MatrixXd h = X;
  for (int l = 0; l < depth; ++l) {
    Eigen::MatrixXd input = h;
    if (dropout_active && dropout_rate > 0.0) {
      Eigen::MatrixXd mask = dropout_mask(
          input.rows(), input.cols(), dropout_rate,
          splitmix64(seed ^ (0x5851f42d4c957f2dULL * (l + 1))));
      input = input.cwiseProduct(mask);
      if (cache) cache->masks.push_back(std::move(mask));
    } else if (cache) {
      cache->masks.emplace_back();
    }
    Eigen::MatrixXd propagated = model.normalized_adjacency * input;
    Eigen::MatrixXd z = propagated * model.layer_weights[l];
    if (cache) {
      cache->propagated.push_back(std::move(propagated));
      cache->preact.push_back(z);
    }
    h = (l + 1 < depth) ? z.cwiseMax(0.0) : z;  // rectifier on hidden layers
    out.hidden.push_back(h);
  }
  out.logits = out.hidden.back();
  return out;
}

Eigen::MatrixXd row_softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p = logits;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double m = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

double masked_loss(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
                   const std::vector<std::uint8_t>& mask) {
  double loss = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    if (!mask[i]) continue;
    double m = logits.row(i).maxCoeff();
    double lse = m + std::log((logits.row(i).array() - m).exp().sum());
    loss += lse - logits(i, labels[i]);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("loss: empty mask");
  return loss / count;
}

double weight_penalty(const GcnModel& model, double weight_decay) {
  double sq = 0.0;
  for (const auto& w : model.layer_weights) sq += w.squaredNorm();
  return 0.5 * weight_decay * sq;
}

struct LossGrads {
  double loss = 0.0;
  std::vector<Eigen::MatrixXd> grads;
};

LossGrads loss_and_grads(const GcnModel& model, const Eigen::MatrixXd& X,
                         const std::vector<int>& labels,
                         const std::vector<std::uint8_t>& mask,
                         double weight_decay, bool dropout_active,
                         double dropout_rate, std::uint64_t seed) {
  const int depth = static_cast<int>(model.layer_weights.size());
  ForwardCache cache;
  ForwardResult fwd =
      forward_impl(model, X, dropout_active, dropout_rate, seed, &cache);

  LossGrads out;
  out.loss = masked_loss(fwd.logits, labels, mask) +
             weight_penalty(model, weight_decay);
  out.grads.resize(depth);

  int count = 0;
  for (std::uint8_t m : mask) count += m;
  Eigen::MatrixXd p = row_softmax(fwd.logits);
  Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if (!mask[i]) continue;
    dz.row(i) = p.row(i) / count;
    dz(i, labels[i]) -= 1.0 / count;
  }
  for (int l = depth - 1; l >= 0; --l) {
    out.grads[l] = cache.propagated[l].transpose() * dz +
                   weight_decay * model.layer_weights[l];
    if (l == 0) break;
    // A_hat is symmetric, so its transpose reuses the same matrix.
    Eigen::MatrixXd dinput = model.normalized_adjacency *
                             (dz * model.layer_weights[l].transpose());
    if (dropout_active && dropout_rate > 0.0) {
      dinput = dinput.cwiseProduct(cache.masks[l]);
    }
    // rectifier subgradient: 0 at exactly 0
    dz = dinput.cwiseProduct(
        (cache.preact[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return out;
}

double masked_accuracy(const Eigen::MatrixXd& logits,
                       const std::vector<int>& labels,
                       const std::vector<std::uint8_t>& mask) {
  int correct = 0, count = 0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    if (!mask[i]) continue;
    Eigen::Index arg = 0;
    logits.row(i).maxCoeff(&arg);
    correct += (static_cast<int>(arg) == labels[i]);
    ++count;
  }
  return count ? double(correct) / count : 0.0;
}

void validate_split(const Graph& g, const Split& split) {
  if (!g.labels) throw std::invalid_argument("train: graph has no labels");
  if (static_cast<int>(split.train.size()) != g.node_count ||
      static_cast<int>(split.val.size()) != g.node_count ||
      static_cast<int>(split.test.size()) != g.node_count) {
    throw std::invalid_argument("train: mask sizes do not match node count");
  }
  for (int i = 0; i < g.node_count; ++i) {
    if (split.train[i] + split.val[i] + split.test[i] > 1) {
      throw std::invalid_argument("train: masks overlap at node " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

Eigen::MatrixXd normalized_adjacency(const Graph& g) {
  const int n = g.node_count;
  Eigen::VectorXd dtilde = Eigen::VectorXd::Ones(n);  // self-loop degree
  for (const auto& [u, v] : g.edges) {
    dtilde[u] += 1.0;
    dtilde[v] += 1.0;
  }
  Eigen::VectorXd dinv = dtilde.array().rsqrt();
  Eigen::MatrixXd ahat = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) ahat(i, i) = dinv[i] * dinv[i];
  for (const auto& [u, v] : g.edges) {
    ahat(u, v) = ahat(v, u) = dinv[u] * dinv[v];
  }
  return ahat;
}

GcnModel init_model(const Graph& g, int input_dim, int class_count,
                    const TrainConfig& config) {
  if (config.depth < 1) throw std::invalid_argument("init_model: depth < 1");
  GcnModel model;
  model.normalized_adjacency = normalized_adjacency(g);
  std::mt19937_64 rng(splitmix64(config.seed));
  std::vector<int> dims;
  dims.push_back(input_dim);
  for (int l = 1; l < config.depth; ++l) dims.push_back(config.hidden_dim);
  dims.push_back(class_count);
  for (int l = 0; l < config.depth; ++l) {
    double limit = std::sqrt(6.0 / (dims[l] + dims[l + 1]));
    std::uniform_real_distribution<double> unif(-limit, limit);
    Eigen::MatrixXd w(dims[l], dims[l + 1]);
    for (int i = 0; i < w.rows(); ++i)
      for (int j = 0; j < w.cols(); ++j) w(i, j) = unif(rng);
    model.layer_weights.push_back(std::move(w));
  }
  return model;
}

ForwardResult forward(const GcnModel& model, const Eigen::MatrixXd& features,
                      bool dropout_active, double dropout_rate,
                      std::uint64_t seed) {
  return forward_impl(model, features, dropout_active, dropout_rate, seed,
                      nullptr);
}

TrainReport train(const Graph& g, const TrainConfig& config, const Split& split,
                  double lambda2_ref) {
  validate_split(g, split);
  if (!g.features) throw std::invalid_argument("train: graph has no features");
  const Eigen::MatrixXd& X = *g.features;
  const std::vector<int>& labels = *g.labels;
  int class_count = *std::max_element(labels.begin(), labels.end()) + 1;

  GcnModel model = init_model(g, static_cast<int>(X.cols()), class_count,
                              config);

  // Adam state
  std::vector<Eigen::MatrixXd> m1, m2;
  for (const auto& w : model.layer_weights) {
    m1.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    m2.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

  TrainReport report;
  report.depth = config.depth;
  report.seed = config.seed;
  double best_val = -1.0;
  std::vector<Eigen::MatrixXd> best_weights = model.layer_weights;
  int wait = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::uint64_t drop_seed = splitmix64(config.seed ^ (0x9e37ULL * epoch));
    LossGrads lg =
        loss_and_grads(model, X, labels, split.train, config.weight_decay,
                       true, config.dropout_rate, drop_seed);
    double t = epoch;
    for (size_t l = 0; l < model.layer_weights.size(); ++l) {
      m1[l] = kBeta1 * m1[l] + (1.0 - kBeta1) * lg.grads[l];
      m2[l] = kBeta2 * m2[l] +
              (1.0 - kBeta2) * lg.grads[l].cwiseProduct(lg.grads[l]);
      Eigen::MatrixXd mhat = m1[l] / (1.0 - std::pow(kBeta1, t));
      Eigen::MatrixXd vhat = m2[l] / (1.0 - std::pow(kBeta2, t));
      model.layer_weights[l].array() -=
          config.learning_rate * mhat.array() / (vhat.array().sqrt() + kEps);
    }
    ForwardResult eval = forward(model, X, false, 0.0, 0);
    double val_acc = masked_accuracy(eval.logits, labels, split.val);
    report.per_epoch.push_back({lg.loss, val_acc});
    if (val_acc > best_val) {
      best_val = val_acc;
      best_weights = model.layer_weights;
      report.best_epoch = epoch;
      wait = 0;
    } else if (++wait >= config.patience) {
      break;
    }
  }

  model.layer_weights = best_weights;
  ForwardResult final_fwd = forward(model, X, false, 0.0, 0);
  report.test_accuracy = masked_accuracy(final_fwd.logits, labels, split.test);

  if (lambda2_ref < 0.0) {
    lambda2_ref = component_fiedler_summary(g).weighted_average_fiedler;
  }
  Eigen::MatrixXd lap = laplacian(g);
  for (const auto& h : final_fwd.hidden) {
    Eigen::MatrixXd centered = center_features(h);
    double energy = dirichlet_energy(lap, centered);
    report.layer_energy.push_back(energy);
    report.rho_trace.push_back(
        lambda2_ref > 0.0 ? energy / (g.node_count * lambda2_ref) : 0.0);
  }
  return report;
}

double gradient_check(const GcnModel& model, const Eigen::MatrixXd& features,
                      const std::vector<int>& labels,
                      const std::vector<std::uint8_t>& mask,
                      double weight_decay) {
  LossGrads analytic = loss_and_grads(model, features, labels, mask,
                                      weight_decay, false, 0.0, 0);
  GcnModel probe = model;
  const double h = 1e-5;
  double worst = 0.0;
  for (size_t l = 0; l < probe.layer_weights.size(); ++l) {
    for (int i = 0; i < probe.layer_weights[l].rows(); ++i) {
      for (int j = 0; j < probe.layer_weights[l].cols(); ++j) {
        double saved = probe.layer_weights[l](i, j);
        probe.layer_weights[l](i, j) = saved + h;
        double up = masked_loss(forward(probe, features, false, 0.0, 0).logits,
                                labels, mask) +
                    weight_penalty(probe, weight_decay);
        probe.layer_weights[l](i, j) = saved - h;
        double down =
            masked_loss(forward(probe, features, false, 0.0, 0).logits, labels,
                        mask) +
            weight_penalty(probe, weight_decay);
        probe.layer_weights[l](i, j) = saved;
        double fd = (up - down) / (2.0 * h);
        double a = analytic.grads[l](i, j);
        double err =
            std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-3});
        worst = std::max(worst, err);
      }
    }
  }
  return worst;
}

SweepResult depth_sweep(const Graph& g, const std::vector<int>& depths,
                        const TrainConfig& config_base, int repeats,
                        const Split& split, int max_threads) {
  if (depths.empty()) throw std::invalid_argument("depth_sweep: no depths");
  for (int d : depths) {
    if (d < 1) throw std::invalid_argument("depth_sweep: depth must be >= 1");
  }
  if (repeats < 1) throw std::invalid_argument("depth_sweep: repeats < 1");
  validate_split(g, split);

  if (max_threads <= 0) {
    max_threads = 1;
    if (const char* env = std::getenv("FA_THREADS")) {
      max_threads = std::max(1, std::atoi(env));
    }
  }

  double lambda2_ref = component_fiedler_summary(g).weighted_average_fiedler;

  SweepResult result;
  result.runs.resize(depths.size() * repeats);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t idx = next.fetch_add(1);
      if (idx >= result.runs.size()) return;
      int depth = depths[idx / repeats];
      int repeat = static_cast<int>(idx % repeats);
      TrainConfig cfg = config_base;
      cfg.depth = depth;
      cfg.seed = config_base.seed + repeat;
      TrainReport rep = train(g, cfg, split, lambda2_ref);
      SweepRun& run = result.runs[idx];
      run.depth = depth;
      run.repeat = repeat;
      run.seed = cfg.seed;
      run.test_accuracy = rep.test_accuracy;
      run.best_epoch = rep.best_epoch;
      run.rho_trace = rep.rho_trace;
    }
  };
  if (max_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < max_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (size_t d = 0; d < depths.size(); ++d) {
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < repeats; ++r) {
      double acc = result.runs[d * repeats + r].test_accuracy;
      sum += acc;
      sumsq += acc * acc;
    }
    double mean = sum / repeats;
    double var = std::max(0.0, sumsq / repeats - mean * mean);
    result.per_depth.push_back({depths[d], mean, std::sqrt(var)});
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  int max_depth = 0;
  for (const auto& run : result.runs) max_depth = std::max(max_depth, run.depth);
  std::ostringstream out;
  out << "depth,repeat,seed,test_accuracy,best_epoch";
  for (int k = 1; k <= max_depth; ++k) out << ",rho_" << k;
  out << "\n";
  char buf[64];
  for (const auto& run : result.runs) {
    out << run.depth << "," << run.repeat << "," << run.seed << ",";
    std::snprintf(buf, sizeof(buf), "%.10g", run.test_accuracy);
    out << buf << "," << run.best_epoch;
    for (int k = 0; k < max_depth; ++k) {
      out << ",";
      if (k < static_cast<int>(run.rho_trace.size())) {
        std::snprintf(buf, sizeof(buf), "%.10g", run.rho_trace[k]);
        out << buf;
      }
    }
    out << "\n";
  }
  return out.str();
}

TrainConfig parse_train_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_train_config: cannot open " + path);
  TrainConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("parse_train_config: line " +
                               std::to_string(line_no) + " is not key=value");
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "depth") cfg.depth = std::stoi(value);
    else if (key == "hidden_dim") cfg.hidden_dim = std::stoi(value);
    else if (key == "learning_rate") cfg.learning_rate = std::stod(value);
    else if (key == "weight_decay") cfg.weight_decay = std::stod(value);
    else if (key == "dropout_rate") cfg.dropout_rate = std::stod(value);
    else if (key == "max_epochs") cfg.max_epochs = std::stoi(value);
    else if (key == "patience") cfg.patience = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else throw std::runtime_error("parse_train_config: unknown key " + key);
  }
  if (cfg.dropout_rate < 0.0 || cfg.dropout_rate >= 1.0) {
    throw std::runtime_error("parse_train_config: dropout_rate out of [0,1)");
  }
  return cfg;
}

}  // namespace fa
