#ifndef FA_SPECTRAL_HPP
#define FA_SPECTRAL_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fa/graph.hpp"
#include "fa/json_fwd.hpp"

namespace fa {

/// Component size above which fiedler_value switches from the dense
/// eigensolver to the deflated Lanczos path.
inline constexpr int kDenseSolverCutoff = 2048;

struct SolverError : std::runtime_error {
  int iterations;
  SolverError(const std::string& what, int iters)
      : std::runtime_error(what), iterations(iters) {}
};

struct Spectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns; empty unless requested
};

/// Full Laplacian eigendecomposition (dense). Eigenvector signs are fixed by
/// making each vector's largest-magnitude entry positive.
Spectrum laplacian_spectrum(const Graph& g, bool want_vectors);

/// Eigenvalues below this count as zero (scales with the Laplacian norm).
double zero_eigenvalue_tolerance(int node_count, int max_deg);

/// lambda2 of a connected graph via Lanczos on the spectrally folded
/// operator (2*Delta+1)*I - L, with the constant vector deflated out.
/// Throws SolverError on non-convergence.
double lanczos_fiedler(const Graph& g, double tol = 1e-10,
                       int max_iterations = 0);

/// lambda2 of a connected graph; dense below kDenseSolverCutoff nodes,
/// Lanczos above. Throws std::domain_error if disconnected or n < 2.
double fiedler_value(const Graph& g);

struct ComponentFiedler {
  int size = 0;
  double lambda2 = 0.0;
};

struct SpectralSummary {
  std::vector<ComponentFiedler> per_component_fiedler;
  double simple_average_fiedler = 0.0;
  double weighted_average_fiedler = 0.0;
  int max_degree = 0;
  int node_count = 0;
  int zero_eigenvalue_count = 0;
};

/// Per-component lambda2 (size-1 components contribute 0) plus the simple
/// and node-weighted aggregates.
SpectralSummary component_fiedler_summary(const Graph& g);

struct BoundsReport {
  double mean_distance_lower = 0.0;
  double mean_distance_upper = 0.0;
  double diameter_lower = 0.0;
  double diameter_upper = 0.0;
};

/// Mean-distance bracket from (n, lambda2, Delta):
///   lower: (2/l2 + (n-2)/2) / (n-1)
///   upper: n/(n-1) * (ceil((Delta+l2)/(4 l2) * ln(n-1)) + 1/2)
/// Throws std::domain_error when l2 <= 0.
BoundsReport mean_distance_bounds(int n, double lambda2, int max_deg);

/// Diameter bracket: lower 4/(n l2), upper 2*ceil(sqrt(2 Delta / l2) * log2 n).
BoundsReport diameter_bounds(int n, double lambda2, int max_deg);

/// Both brackets in one report.
BoundsReport spectral_bounds(int n, double lambda2, int max_deg);

/// r_k = |{v : d(origin, v) <= k}| for k = 0..diameter. Requires connected g.
std::vector<int> growth_curve(const Graph& g, int origin);

enum class ConnectivityVerdict { kSweetSpot, kOverConnected, kUnderConnected };

std::string to_string(ConnectivityVerdict v);

struct DepthFlag {
  int depth = 0;
  bool under_reaching = false;
};

struct DepthAdvice {
  ConnectivityVerdict verdict = ConnectivityVerdict::kSweetSpot;
  std::vector<std::string> rationale;
  std::vector<DepthFlag> depth_flags;
};

/// Verdict from the Fiedler aggregates (weighted 0.5..1.2 sweet spot,
/// simple average > 1.4 over-connected) plus an under-reaching flag for
/// every candidate depth below the diameter lower bound.
DepthAdvice depth_advice(const SpectralSummary& summary,
                         const BoundsReport& bounds,
                         const std::vector<int>& candidate_depths);

nlohmann::json to_json(const SpectralSummary& s);
nlohmann::json to_json(const BoundsReport& b);
nlohmann::json to_json(const DepthAdvice& a);

}  // namespace fa

#endif
