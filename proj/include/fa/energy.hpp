#ifndef FA_ENERGY_HPP
#define FA_ENERGY_HPP

#include <Eigen/Dense>

#include "fa/json_fwd.hpp"

namespace fa {

struct SpectralCoefficients {
  Eigen::MatrixXd w;           // n x m; row i is w_i^T
  double basis_residual = 0.0; // Gram-matrix deviation of the supplied basis
};

struct EnergyReport {
  double dirichlet_energy = 0.0;
  double fiedler_bound = 0.0;  // n * lambda2
  double rho = 0.0;
  double total_feature_norm = 0.0;  // sum of squared row norms
  bool centered = false;
};

/// Tr(V^T L V), cross-checked against the edge-sum form recovered from L's
/// off-diagonal entries. Throws if the two forms disagree.
double dirichlet_energy(const Eigen::MatrixXd& laplacian,
                        const Eigen::MatrixXd& features);

/// Subtracts the column mean; output columns sum to zero.
Eigen::MatrixXd center_features(const Eigen::MatrixXd& features);

/// Uniformly rescales rows so the squared row norms sum to n.
/// Throws std::domain_error on an all-zero matrix.
Eigen::MatrixXd normalize_total_energy(const Eigen::MatrixXd& features);

/// w_i = u_i^T V for each eigenvector column u_i. Throws
/// std::invalid_argument when the basis is not orthonormal (the message
/// carries the measured Gram residual).
SpectralCoefficients spectral_coefficients(const Eigen::MatrixXd& features,
                                           const Eigen::MatrixXd& eigenvectors);

/// Sum over i >= 2 of lambda_i * ||w_i||^2; equals the Dirichlet energy for
/// centered input. Throws std::domain_error when V is not centered.
double energy_spectral_identity(const Eigen::MatrixXd& features,
                                const Eigen::VectorXd& eigenvalues,
                                const SpectralCoefficients& coeffs);

/// The minimum Dirichlet energy n*lambda2 of a centered, energy-n signal.
double fiedler_bound(int n, double lambda2);

/// V = u2 * (sqrt(n) q)^T: centered, total energy n, energy exactly the
/// Fiedler bound. u2 and q must be unit vectors.
Eigen::MatrixXd minimal_energy_features(const Eigen::VectorXd& fiedler_vector,
                                        const Eigen::VectorXd& direction,
                                        int n);

/// rho = dirichlet_energy / (n * lambda2_ref).
/// Throws std::domain_error when lambda2_ref <= 0.
double rho_score(const Eigen::MatrixXd& laplacian, double lambda2_ref,
                 const Eigen::MatrixXd& features);

nlohmann::json to_json(const EnergyReport& r);

}  // namespace fa

#endif
