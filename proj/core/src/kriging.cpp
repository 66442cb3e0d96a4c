#include "stokrig/kriging.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace stokrig {

namespace {

Prediction finish_prediction(double mean, double mse_raw) {
  Prediction p;
  p.mean = mean;
  p.mse_raw = mse_raw;
  if (mse_raw < -1e-10) {
    std::cerr << "stokrig: clamping negative MSE " << mse_raw << " to zero\n";
  }
  p.mse = mse_raw > 0.0 ? mse_raw : 0.0;
  double half = kZ95 * std::sqrt(p.mse);
  p.ci_lo = mean - half;
  p.ci_hi = mean + half;
  return p;
}

}  // namespace

void CorrelationParams::validate() const {
  if (theta.size() == 0 || (theta.array() <= 0.0).any()) {
    throw InvalidArgumentError("CorrelationParams: theta must be positive");
  }
  if (!(sigma2 > 0.0)) throw InvalidArgumentError("CorrelationParams: sigma2 must be positive");
}

double gaussian_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& x_other,
                            const Eigen::VectorXd& theta) {
  if (x.size() != x_other.size() || x.size() != theta.size()) {
    throw DimensionError("gaussian_correlation: dimension mismatch");
  }
  double s = (theta.array() * (x - x_other).array().square()).sum();
  return std::exp(-s);
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& points, const Eigen::VectorXd& theta) {
  if (points.cols() != theta.size()) throw DimensionError("correlation_matrix: dimension mismatch");
  const Eigen::Index k = points.rows();
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    Eigen::VectorXd col = points.col(c);
    Eigen::MatrixXd diff = col.replicate(1, k) - col.transpose().replicate(k, 1);
    d2.noalias() += theta(c) * diff.cwiseProduct(diff);
  }
  return (-d2.array()).exp();
}

BlueEstimate blue_estimates(const Eigen::MatrixXd& trend_matrix, const SpdFactor& corr,
                            const Eigen::VectorXd& y) {
  const Eigen::Index k = trend_matrix.rows();
  if (y.size() != k || corr.rows() != k) throw DimensionError("blue_estimates: size mismatch");

  Eigen::MatrixXd rinv_f = corr.solve(trend_matrix);
  Eigen::MatrixXd gram = trend_matrix.transpose() * rinv_f;
  Eigen::LLT<Eigen::MatrixXd> gram_llt(gram);
  if (gram_llt.info() != Eigen::Success) {
    throw IllConditionedError("blue_estimates: singular F'R^-1F (ill-posed trend)");
  }
  BlueEstimate est;
  est.beta = gram_llt.solve(rinv_f.transpose() * y);
  Eigen::VectorXd residual = y - trend_matrix * est.beta;
  est.sigma2 = corr.quad_form(residual) / static_cast<double>(k);
  return est;
}

double kriging_log_objective(const TrendModel& trend, const Eigen::MatrixXd& points,
                             const Eigen::VectorXd& y, const Eigen::VectorXd& theta) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SpdFactor corr = SpdFactor::try_compute(correlation_matrix(points, theta));
  if (!corr.valid()) return nan;
  try {
    BlueEstimate est = blue_estimates(trend.eval_matrix(points), corr, y);
    double k = static_cast<double>(points.rows());
    // sigma^2 can reach exactly zero on noise-free degenerate data; keep the
    // objective finite and steer the optimizer with the logdet term alone.
    double ls = est.sigma2 > 0.0 ? std::log(est.sigma2) : -746.0;
    return ls + corr.log_det() / k;
  } catch (const Error&) {
    return nan;
  }
}

KrigingModel::KrigingModel(TrendModel trend, Eigen::MatrixXd points, Eigen::VectorXd values,
                           Eigen::VectorXd theta)
    : trend_(std::move(trend)), points_(std::move(points)), values_(std::move(values)) {
  const Eigen::Index k = points_.rows();
  if (values_.size() != k) throw DimensionError("KrigingModel: y length mismatch");
  if (k <= trend_.size()) throw InvalidArgumentError("KrigingModel: need k > trend size");

  params_.theta = std::move(theta);
  if (params_.theta.size() != points_.cols() || (params_.theta.array() <= 0.0).any()) {
    throw InvalidArgumentError("KrigingModel: theta must be positive, one rate per dimension");
  }
  corr_ = SpdFactor::compute(correlation_matrix(points_, params_.theta));
  trend_matrix_ = trend_.eval_matrix(points_);
  BlueEstimate est = blue_estimates(trend_matrix_, corr_, values_);
  beta_ = est.beta;
  params_.sigma2 = est.sigma2;
  corr_weights_ = corr_.solve(values_ - trend_matrix_ * beta_);
  rinv_f_ = corr_.solve(trend_matrix_);
  gram_llt_.compute(trend_matrix_.transpose() * rinv_f_);
  double ls = params_.sigma2 > 0.0 ? std::log(params_.sigma2) : -746.0;
  log_objective_ = ls + corr_.log_det() / static_cast<double>(k);
}

Prediction KrigingModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != points_.cols()) throw DimensionError("predict: point dimension mismatch");
  const Eigen::Index k = points_.rows();
  Eigen::VectorXd r(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    r(i) = gaussian_correlation(x, points_.row(i).transpose(), params_.theta);
  }
  Eigen::RowVectorXd f = trend_.eval(x);

  double mean = f * beta_ + r.dot(corr_weights_);
  Eigen::VectorXd u = rinv_f_.transpose() * r - f.transpose();
  double inflation = u.dot(gram_llt_.solve(u));
  double mse_raw = params_.sigma2 * (1.0 - corr_.quad_form(r) + inflation);
  return finish_prediction(mean, mse_raw);
}

KrigingModel make_kriging_model(const TrendModel& trend, const Eigen::MatrixXd& points,
                                const Eigen::VectorXd& y, const Eigen::VectorXd& theta) {
  return KrigingModel(trend, points, y, theta);
}

std::vector<std::pair<double, double>> default_theta_bounds(const Eigen::MatrixXd& points) {
  std::vector<std::pair<double, double>> bounds;
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    double extent = points.col(c).maxCoeff() - points.col(c).minCoeff();
    if (!(extent > 0.0)) extent = 1.0;
    double scale = std::log10(1.0 / (extent * extent));
    bounds.emplace_back(scale - 3.0, scale + 3.0);
  }
  return bounds;
}

KrigingModel fit_kriging(const TrendModel& trend, const Eigen::MatrixXd& points,
                         const Eigen::VectorXd& y, GaConfig config) {
  if (points.rows() != y.size()) throw DimensionError("fit_kriging: size mismatch");
  if (config.bounds.empty()) config.bounds = default_theta_bounds(points);

  auto objective = [&](const Eigen::VectorXd& genes) {
    Eigen::VectorXd theta = Eigen::pow(10.0, genes.array());
    return -kriging_log_objective(trend, points, y, theta);
  };
  GaResult best = ga_maximize(objective, config);
  Eigen::VectorXd theta = Eigen::pow(10.0, best.genes.array());
  return KrigingModel(trend, points, y, theta);
}

Prediction predict_kriging(const KrigingModel& model, const Eigen::VectorXd& x) {
  return model.predict(x);
}

}  // namespace stokrig
