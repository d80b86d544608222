#include "fa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

namespace fa {
namespace {

void fix_vector_signs(Eigen::MatrixXd& vectors) {
  for (int c = 0; c < vectors.cols(); ++c) {
    int idx = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&idx);
    if (vectors(idx, c) < 0.0) vectors.col(c) = -vectors.col(c);
  }
}

// (Lx)_i = deg_i x_i - sum_{j ~ i} x_j
Eigen::VectorXd laplacian_apply(const std::vector<std::vector<int>>& adj,
                                const std::vector<int>& deg,
                                const Eigen::VectorXd& x) {
  Eigen::VectorXd y(x.size());
  for (int i = 0; i < x.size(); ++i) {
    double acc = deg[i] * x[i];
    for (int j : adj[i]) acc -= x[j];
    y[i] = acc;
  }
  return y;
}

}  // namespace

Spectrum laplacian_spectrum(const Graph& g, bool want_vectors) {
  Eigen::MatrixXd lap = laplacian(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      lap, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SolverError("laplacian_spectrum: dense eigensolver failed", 0);
  }
  Spectrum s;
  s.values = solver.eigenvalues();
  if (want_vectors) {
    s.vectors = solver.eigenvectors();
    fix_vector_signs(s.vectors);
  }
  return s;
}

double zero_eigenvalue_tolerance(int node_count, int max_deg) {
  return 1e-8 * node_count * std::max(max_deg, 1);
}

double lanczos_fiedler(const Graph& g, double tol, int max_iterations) {
  const int n = g.node_count;
  if (n < 2) throw std::domain_error("lanczos_fiedler: needs >= 2 nodes");
  auto adj = adjacency_list(g);
  auto deg = degrees(g);
  const double shift = 2.0 * max_degree(g) + 1.0;
  if (max_iterations <= 0) max_iterations = std::min(n - 1, 600);

  // Lanczos on M = shift*I - L restricted to the complement of the constant
  // vector; the largest Ritz value there is shift - lambda2.
  const Eigen::VectorXd ones =
      Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ static_cast<uint64_t>(n));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  v -= ones.dot(v) * ones;
  double vnorm = v.norm();
  if (vnorm < 1e-12) throw SolverError("lanczos_fiedler: degenerate start", 0);
  v /= vnorm;

  Eigen::MatrixXd basis(n, max_iterations);
  std::vector<double> alpha, beta;  // T diagonal / off-diagonal
  basis.col(0) = v;

  auto ritz_pair = [&](int m, double& theta, double& bottom) {
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    int top = m - 1;  // largest Ritz value
    theta = es.eigenvalues()[top];
    bottom = std::abs(es.eigenvectors()(m - 1, top));
  };

  for (int j = 0; j < max_iterations; ++j) {
    Eigen::VectorXd w =
        shift * basis.col(j) - laplacian_apply(adj, deg, basis.col(j));
    double a = basis.col(j).dot(w);
    alpha.push_back(a);
    w -= a * basis.col(j);
    if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
    // full reorthogonalization (twice) against the deflated space and basis
    for (int pass = 0; pass < 2; ++pass) {
      w -= ones.dot(w) * ones;
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    }
    double b = w.norm();

    if (j >= 1 && (j % 8 == 0 || b < 1e-14 || j == max_iterations - 1)) {
      double theta = 0.0, bottom = 0.0;
      ritz_pair(j + 1, theta, bottom);
      double residual = b * bottom;  // Krylov residual norm for the Ritz pair
      if (residual <= tol * shift) {
        double lambda2 = shift - theta;
        return std::max(lambda2, 0.0);
      }
    }
    if (b < 1e-14) {
      double theta = 0.0, bottom = 0.0;
      ritz_pair(j + 1, theta, bottom);
      return std::max(shift - theta, 0.0);
    }
    if (j + 1 < max_iterations) {
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }
  }
  throw SolverError("lanczos_fiedler: no convergence", max_iterations);
}

double fiedler_value(const Graph& g) {
  if (g.node_count < 2) {
    throw std::domain_error("fiedler_value: needs at least 2 nodes");
  }
  auto cd = connected_components(g);
  if (cd.component_count != 1) {
    throw std::domain_error(
        "fiedler_value: graph is disconnected; use "
        "component_fiedler_summary for per-component values");
  }
  if (g.node_count <= kDenseSolverCutoff) {
    return laplacian_spectrum(g, false).values[1];
  }
  return lanczos_fiedler(g);
}

SpectralSummary component_fiedler_summary(const Graph& g) {
  SpectralSummary summary;
  summary.node_count = g.node_count;
  summary.max_degree = max_degree(g);
  const double zero_tol =
      zero_eigenvalue_tolerance(g.node_count, summary.max_degree);
  auto cd = connected_components(g);
  double weighted_sum = 0.0;
  double simple_sum = 0.0;
  for (int c = 0; c < cd.component_count; ++c) {
    Graph sub = component_subgraph(g, cd, c);
    double lambda2 = 0.0;
    if (sub.node_count == 1) {
      summary.zero_eigenvalue_count += 1;  // the 1x1 Laplacian is [0]
    } else if (sub.node_count <= kDenseSolverCutoff) {
      Spectrum s = laplacian_spectrum(sub, false);
      lambda2 = s.values[1];
      for (int i = 0; i < s.values.size(); ++i) {
        if (s.values[i] < zero_tol) summary.zero_eigenvalue_count += 1;
      }
    } else {
      lambda2 = lanczos_fiedler(sub);
      summary.zero_eigenvalue_count += 1;  // exact constant kernel
    }
    summary.per_component_fiedler.push_back({sub.node_count, lambda2});
    weighted_sum += double(sub.node_count) * lambda2;
    simple_sum += lambda2;
  }
  summary.simple_average_fiedler = simple_sum / cd.component_count;
  summary.weighted_average_fiedler = weighted_sum / g.node_count;
  return summary;
}

BoundsReport mean_distance_bounds(int n, double lambda2, int max_deg) {
  if (lambda2 <= 0.0) {
    throw std::domain_error("mean_distance_bounds: lambda2 must be positive");
  }
  if (n < 2) throw std::domain_error("mean_distance_bounds: n must be >= 2");
  BoundsReport r;
  r.mean_distance_lower = (2.0 / lambda2 + (n - 2) / 2.0) / (n - 1);
  r.mean_distance_upper =
      double(n) / (n - 1) *
      (std::ceil((max_deg + lambda2) / (4.0 * lambda2) * std::log(n - 1.0)) +
       0.5);
  return r;
}

BoundsReport diameter_bounds(int n, double lambda2, int max_deg) {
  if (lambda2 <= 0.0) {
    throw std::domain_error("diameter_bounds: lambda2 must be positive");
  }
  if (n < 2) throw std::domain_error("diameter_bounds: n must be >= 2");
  BoundsReport r;
  r.diameter_lower = 4.0 / (n * lambda2);
  r.diameter_upper =
      2.0 * std::ceil(std::sqrt(2.0 * max_deg / lambda2) * std::log2(double(n)));
  return r;
}

BoundsReport spectral_bounds(int n, double lambda2, int max_deg) {
  BoundsReport r = mean_distance_bounds(n, lambda2, max_deg);
  BoundsReport d = diameter_bounds(n, lambda2, max_deg);
  r.diameter_lower = d.diameter_lower;
  r.diameter_upper = d.diameter_upper;
  return r;
}

std::vector<int> growth_curve(const Graph& g, int origin) {
  if (origin < 0 || origin >= g.node_count) {
    throw std::out_of_range("growth_curve: origin out of range");
  }
  auto dist = bfs_distances(g, origin);
  for (int d : dist) {
    if (d == kUnreachable) {
      throw std::domain_error("growth_curve: graph is disconnected");
    }
  }
  // Indexed k = 0..diam(G), so r ends at n even when the origin's
  // eccentricity is smaller.
  std::vector<int> r(diameter(g) + 1, 0);
  for (int d : dist) ++r[d];
  for (size_t k = 1; k < r.size(); ++k) r[k] += r[k - 1];
  return r;
}

std::string to_string(ConnectivityVerdict v) {
  switch (v) {
    case ConnectivityVerdict::kSweetSpot:
      return "sweet-spot";
    case ConnectivityVerdict::kOverConnected:
      return "over-connected";
    case ConnectivityVerdict::kUnderConnected:
      return "under-connected";
  }
  return "unknown";
}

DepthAdvice depth_advice(const SpectralSummary& summary,
                         const BoundsReport& bounds,
                         const std::vector<int>& candidate_depths) {
  constexpr double kSweetLow = 0.5;
  constexpr double kSweetHigh = 1.2;
  constexpr double kSimpleHigh = 1.4;

  DepthAdvice advice;
  const double w = summary.weighted_average_fiedler;
  const double s = summary.simple_average_fiedler;
  if (s > kSimpleHigh || w > kSweetHigh) {
    advice.verdict = ConnectivityVerdict::kOverConnected;
    if (s > kSimpleHigh) {
      advice.rationale.push_back(
          "simple-average Fiedler value " + std::to_string(s) +
          " exceeds 1.4; high connectivity correlates with over-smoothing "
          "risk (threshold applied to the simple average)");
    }
    if (w > kSweetHigh) {
      advice.rationale.push_back("weighted-average Fiedler value " +
                                 std::to_string(w) +
                                 " is above the 0.5-1.2 sweet spot");
    }
  } else if (w < kSweetLow) {
    advice.verdict = ConnectivityVerdict::kUnderConnected;
    advice.rationale.push_back(
        "weighted-average Fiedler value " + std::to_string(w) +
        " is below the 0.5-1.2 sweet spot; sparse connectivity raises "
        "under-reaching risk");
  } else {
    advice.verdict = ConnectivityVerdict::kSweetSpot;
    advice.rationale.push_back("weighted-average Fiedler value " +
                               std::to_string(w) +
                               " lies in the 0.5-1.2 sweet spot");
  }
  for (int depth : candidate_depths) {
    bool flag = double(depth) < bounds.diameter_lower;
    advice.depth_flags.push_back({depth, flag});
    if (flag) {
      advice.rationale.push_back(
          "depth " + std::to_string(depth) +
          " is below the diameter lower bound " +
          std::to_string(bounds.diameter_lower) +
          "; nodes farther apart than the depth stay mutually invisible "
          "(under-reaching)");
    }
  }
  return advice;
}

nlohmann::json to_json(const SpectralSummary& s) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& c : s.per_component_fiedler) {
    per.push_back({{"component_size", c.size}, {"lambda2", c.lambda2}});
  }
  return {{"per_component_fiedler", per},
          {"simple_average_fiedler", s.simple_average_fiedler},
          {"weighted_average_fiedler", s.weighted_average_fiedler},
          {"max_degree", s.max_degree},
          {"node_count", s.node_count},
          {"zero_eigenvalue_count", s.zero_eigenvalue_count}};
}

nlohmann::json to_json(const BoundsReport& b) {
  return {{"mean_distance_lower", b.mean_distance_lower},
          {"mean_distance_upper", b.mean_distance_upper},
          {"diameter_lower", b.diameter_lower},
          {"diameter_upper", b.diameter_upper}};
}

nlohmann::json to_json(const DepthAdvice& a) {
  nlohmann::json flags = nlohmann::json::array();
  for (const auto& f : a.depth_flags) {
    flags.push_back({{"depth", f.depth}, {"under_reaching", f.under_reaching}});
  }
  return {{"verdict", to_string(a.verdict)},
          {"rationale", a.rationale},
          {"depth_flags", flags}};
}

}  // namespace fa
