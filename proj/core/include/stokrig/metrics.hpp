#pragma once

#include <Eigen/Dense>

#include "stokrig/errors.hpp"

namespace stokrig {

/// Dense validation set: K points covering the domain with their analytic
/// (noise-free) mean responses, plus the noise scale sigma_vs used by the
/// NMAE normalization.
struct ValidationSet {
  Eigen::MatrixXd points;     // K x M
  Eigen::VectorXd true_means; // M(x)
  double sigma_vs = 0.0;

  Eigen::Index size() const { return points.rows(); }
};

/// Empirical root mean squared error sqrt(mean((pred - truth)^2)).
double ermse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& truth);

/// Normalized maximum absolute error max|pred - truth| / (K * sigma_vs).
/// The normalization includes the validation-set size K.
double nmae(const Eigen::VectorXd& predictions, const Eigen::VectorXd& truth, double sigma_vs);

/// Noise scale of the validation responses:
/// sqrt(mean((sample_mean - truth)^2)).
double sigma_vs(const Eigen::VectorXd& sample_means, const Eigen::VectorXd& truth);

}  // namespace stokrig
