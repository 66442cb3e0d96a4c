#include "stokrig/metrics.hpp"

#include <cmath>

namespace stokrig {

double ermse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& truth) {
  if (predictions.size() != truth.size() || predictions.size() == 0) {
    throw DimensionError("ermse: length mismatch");
  }
  return std::sqrt((predictions - truth).squaredNorm() / static_cast<double>(truth.size()));
}

double nmae(const Eigen::VectorXd& predictions, const Eigen::VectorXd& truth, double sigma_vs) {
  if (predictions.size() != truth.size() || predictions.size() == 0) {
    throw DimensionError("nmae: length mismatch");
  }
  if (!(sigma_vs > 0.0)) throw InvalidArgumentError("nmae: sigma_vs must be positive");
  double max_abs = (predictions - truth).cwiseAbs().maxCoeff();
  return max_abs / (static_cast<double>(truth.size()) * sigma_vs);
}

double sigma_vs(const Eigen::VectorXd& sample_means, const Eigen::VectorXd& truth) {
  if (sample_means.size() != truth.size() || sample_means.size() == 0) {
    throw DimensionError("sigma_vs: length mismatch");
  }
  return std::sqrt((sample_means - truth).squaredNorm() / static_cast<double>(truth.size()));
}

}  // namespace stokrig
