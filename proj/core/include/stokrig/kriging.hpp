#pragma once

#include <Eigen/Dense>

#include "stokrig/ga.hpp"
#include "stokrig/spd.hpp"
#include "stokrig/trend.hpp"

namespace stokrig {

/// Gaussian-kernel hyperparameters: anisotropic rates theta and process
/// variance sigma^2.
struct CorrelationParams {
  Eigen::VectorXd theta;
  double sigma2 = 1.0;

  void validate() const;
};

/// Point prediction with its mean-squared error. `mse` is clamped to zero;
/// `mse_raw` keeps the pre-clamp value for positivity audits. The 95%
/// confidence band is mean -/+ 1.959964 * sqrt(mse).
struct Prediction {
  double mean = 0.0;
  double mse = 0.0;
  double mse_raw = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

constexpr double kZ95 = 1.959964;

/// exp(-sum_d theta_d (x_d - x'_d)^2); 1 iff x == x'.
double gaussian_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& x_other,
                            const Eigen::VectorXd& theta);

/// k x k unit-diagonal correlation matrix over the design points.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& points, const Eigen::VectorXd& theta);

struct BlueEstimate {
  Eigen::VectorXd beta;
  double sigma2 = 0.0;
};

/// Generalized-least-squares closed forms under the factored correlation:
/// beta = (F'R^-1F)^-1 F'R^-1 y, sigma^2 = (1/k)(y-Fb)'R^-1(y-Fb).
/// Throws IllConditionedError when F'R^-1F is singular.
BlueEstimate blue_estimates(const Eigen::MatrixXd& trend_matrix, const SpdFactor& corr,
                            const Eigen::VectorXd& y);

/// Fitted deterministic Universal Kriging surrogate. Immutable after
/// construction; predictions are safe to run concurrently.
class KrigingModel {
public:
  KrigingModel(TrendModel trend, Eigen::MatrixXd points, Eigen::VectorXd values,
               Eigen::VectorXd theta);

  Prediction predict(const Eigen::VectorXd& x) const;

  const TrendModel& trend() const { return trend_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  const CorrelationParams& params() const { return params_; }
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& values() const { return values_; }
  double nugget() const { return corr_.nugget(); }
  /// Concentrated likelihood objective at the fitted theta, in log space:
  /// log sigma^2 + logdet(R)/k.
  double log_objective() const { return log_objective_; }

private:
  TrendModel trend_;
  Eigen::MatrixXd points_;
  Eigen::VectorXd values_;
  CorrelationParams params_;
  SpdFactor corr_;
  Eigen::MatrixXd trend_matrix_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd corr_weights_;  // R^-1 (y - F beta)
  Eigen::MatrixXd rinv_f_;        // R^-1 F
  Eigen::LLT<Eigen::MatrixXd> gram_llt_;  // F' R^-1 F
  double log_objective_ = 0.0;
};

/// Evaluates the concentrated theta-only objective in log space:
/// log((1/k)(y-Fb)'R^-1(y-Fb)) + logdet(R)/k. Returns NaN when R cannot be
/// factorized (infeasible candidate).
double kriging_log_objective(const TrendModel& trend, const Eigen::MatrixXd& points,
                             const Eigen::VectorXd& y, const Eigen::VectorXd& theta);

/// Builds the model at a fixed theta (BLUE beta/sigma^2, cached solves).
KrigingModel make_kriging_model(const TrendModel& trend, const Eigen::MatrixXd& points,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& theta);

/// Default log10-theta search box: [1e-3, 1e3] scaled by the squared extent
/// of each input dimension over the design.
std::vector<std::pair<double, double>> default_theta_bounds(const Eigen::MatrixXd& points);

/// Maximum-likelihood fit of theta by minimizing the concentrated objective
/// with the genetic optimizer (bounds auto-derived when the config leaves
/// them empty), then closing the BLUE forms at the optimum.
KrigingModel fit_kriging(const TrendModel& trend, const Eigen::MatrixXd& points,
                         const Eigen::VectorXd& y, GaConfig config = {});

Prediction predict_kriging(const KrigingModel& model, const Eigen::VectorXd& x);

}  // namespace stokrig
