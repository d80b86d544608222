#include "fa/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace fa {
namespace {

constexpr double kRelTol = 1e-9;
constexpr double kAbsTol = 1e-12;

bool close(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= std::max(kRelTol * scale, kAbsTol);
}

}  // namespace

double dirichlet_energy(const Eigen::MatrixXd& laplacian,
                        const Eigen::MatrixXd& features) {
  if (laplacian.rows() != laplacian.cols() ||
      laplacian.rows() != features.rows()) {
    throw std::invalid_argument("dirichlet_energy: shape mismatch");
  }
  const double trace_form =
      (features.transpose() * laplacian * features).trace();
  // Edge-sum form, edges recovered from the strictly-upper off-diagonals.
  double edge_sum = 0.0;
  for (int i = 0; i < laplacian.rows(); ++i) {
    for (int j = i + 1; j < laplacian.cols(); ++j) {
      if (laplacian(i, j) != 0.0) {
        edge_sum += (features.row(i) - features.row(j)).squaredNorm();
      }
    }
  }
  if (!close(trace_form, edge_sum)) {
    throw std::runtime_error(
        "dirichlet_energy: trace and edge-sum forms disagree (" +
        std::to_string(trace_form) + " vs " + std::to_string(edge_sum) + ")");
  }
  return edge_sum;
}

Eigen::MatrixXd center_features(const Eigen::MatrixXd& features) {
  if (features.rows() == 0) return features;
  Eigen::RowVectorXd mean = features.colwise().mean();
  return features.rowwise() - mean;
}

Eigen::MatrixXd normalize_total_energy(const Eigen::MatrixXd& features) {
  const double total = features.squaredNorm();
  if (total <= 0.0) {
    throw std::domain_error(
        "normalize_total_energy: zero matrix cannot satisfy the energy "
        "constraint");
  }
  return features * std::sqrt(double(features.rows()) / total);
}

SpectralCoefficients spectral_coefficients(
    const Eigen::MatrixXd& features, const Eigen::MatrixXd& eigenvectors) {
  if (eigenvectors.rows() != features.rows()) {
    throw std::invalid_argument("spectral_coefficients: shape mismatch");
  }
  const Eigen::MatrixXd gram = eigenvectors.transpose() * eigenvectors;
  const double residual =
      (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (residual > 1e-8) {
    throw std::invalid_argument(
        "spectral_coefficients: basis not orthonormal, Gram residual " +
        std::to_string(residual));
  }
  SpectralCoefficients c;
  c.w = eigenvectors.transpose() * features;
  c.basis_residual = residual;
  return c;
}

double energy_spectral_identity(const Eigen::MatrixXd& features,
                                const Eigen::VectorXd& eigenvalues,
                                const SpectralCoefficients& coeffs) {
  const double col_sum = features.colwise().sum().cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, features.cwiseAbs().maxCoeff());
  if (col_sum > 1e-8 * scale * features.rows()) {
    throw std::domain_error("energy_spectral_identity: features not centered");
  }
  if (eigenvalues.size() != coeffs.w.rows()) {
    throw std::invalid_argument("energy_spectral_identity: size mismatch");
  }
  double total = 0.0;
  for (int i = 1; i < eigenvalues.size(); ++i) {
    total += eigenvalues[i] * coeffs.w.row(i).squaredNorm();
  }
  return total;
}

double fiedler_bound(int n, double lambda2) { return double(n) * lambda2; }

Eigen::MatrixXd minimal_energy_features(const Eigen::VectorXd& fiedler_vector,
                                        const Eigen::VectorXd& direction,
                                        int n) {
  if (fiedler_vector.size() != n) {
    throw std::invalid_argument("minimal_energy_features: u2 length != n");
  }
  if (!close(fiedler_vector.norm(), 1.0) || !close(direction.norm(), 1.0)) {
    throw std::invalid_argument(
        "minimal_energy_features: u2 and q must be unit vectors");
  }
  return fiedler_vector * (std::sqrt(double(n)) * direction).transpose();
}

double rho_score(const Eigen::MatrixXd& laplacian, double lambda2_ref,
                 const Eigen::MatrixXd& features) {
  if (lambda2_ref <= 0.0) {
    throw std::domain_error("rho_score: lambda2_ref must be positive");
  }
  return dirichlet_energy(laplacian, features) /
         (double(laplacian.rows()) * lambda2_ref);
}

nlohmann::json to_json(const EnergyReport& r) {
  return {{"dirichlet_energy", r.dirichlet_energy},
          {"fiedler_bound", r.fiedler_bound},
          {"rho", r.rho},
          {"total_feature_norm", r.total_feature_norm},
          {"centered", r.centered}};
}

}  // namespace fa
