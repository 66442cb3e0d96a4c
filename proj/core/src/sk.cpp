#include "stokrig/sk.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace stokrig {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

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

ExperimentalDesign ExperimentalDesign::from_raw(Eigen::MatrixXd points,
                                                std::vector<std::vector<double>> outputs) {
  const Eigen::Index k = points.rows();
  if (static_cast<Eigen::Index>(outputs.size()) != k) {
    throw DimensionError("ExperimentalDesign: outputs per point do not match point count");
  }
  ExperimentalDesign ed;
  ed.points = std::move(points);
  ed.replications.resize(outputs.size());
  ed.sample_means.resize(k);
  ed.sample_variances.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& reps = outputs[static_cast<std::size_t>(i)];
    int n = static_cast<int>(reps.size());
    if (n < 1) throw InvalidArgumentError("ExperimentalDesign: point without replications");
    double mean = 0.0;
    for (double v : reps) mean += v;
    mean /= n;
    double var = 0.0;
    if (n >= 2) {
      for (double v : reps) var += (v - mean) * (v - mean);
      var /= (n - 1);
    }
    ed.replications[static_cast<std::size_t>(i)] = n;
    ed.sample_means(i) = mean;
    ed.sample_variances(i) = var;
  }
  ed.raw_outputs = std::move(outputs);
  ed.validate();
  return ed;
}

ExperimentalDesign ExperimentalDesign::with_known_variances(Eigen::MatrixXd points,
                                                            Eigen::VectorXd means,
                                                            Eigen::VectorXd variances) {
  ExperimentalDesign ed;
  ed.points = std::move(points);
  ed.sample_means = std::move(means);
  ed.sample_variances = std::move(variances);
  ed.replications.assign(static_cast<std::size_t>(ed.points.rows()), 1);
  ed.variances_supplied = true;
  ed.validate();
  return ed;
}

void ExperimentalDesign::validate() const {
  const Eigen::Index k = points.rows();
  if (k < 1) throw InvalidArgumentError("ExperimentalDesign: empty design");
  if (static_cast<Eigen::Index>(replications.size()) != k ||
      sample_means.size() != k || sample_variances.size() != k) {
    throw DimensionError("ExperimentalDesign: field sizes disagree");
  }
  // A point with n_i = 1 and no supplied variance is structurally valid (the
  // variance slot holds zero); intrinsic_covariance rejects it when used.
  for (Eigen::Index i = 0; i < k; ++i) {
    if (replications[static_cast<std::size_t>(i)] < 1) {
      throw InvalidArgumentError("ExperimentalDesign: replication count < 1");
    }
    if (sample_variances(i) < 0.0) {
      throw InvalidArgumentError("ExperimentalDesign: negative variance");
    }
  }
  if (!raw_outputs.empty()) {
    if (static_cast<Eigen::Index>(raw_outputs.size()) != k) {
      throw DimensionError("ExperimentalDesign: raw outputs size mismatch");
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto& reps = raw_outputs[static_cast<std::size_t>(i)];
      if (static_cast<int>(reps.size()) != replications[static_cast<std::size_t>(i)]) {
        throw InvalidArgumentError("ExperimentalDesign: replications inconsistent with raw outputs");
      }
      double mean = 0.0;
      for (double v : reps) mean += v;
      mean /= static_cast<double>(reps.size());
      if (std::abs(mean - sample_means(i)) > 1e-9 * std::max(1.0, std::abs(mean))) {
        throw InvalidArgumentError("ExperimentalDesign: sample means inconsistent with raw outputs");
      }
    }
  }
}

Eigen::VectorXd intrinsic_covariance(const ExperimentalDesign& ed) {
  ed.validate();
  const Eigen::Index k = ed.size();
  Eigen::VectorXd diag(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    int n = ed.replications[static_cast<std::size_t>(i)];
    if (n < 2 && !ed.variances_supplied) {
      throw InsufficientReplicationError(
          "intrinsic_covariance: point " + std::to_string(i) +
          " has a single replication and no supplied variance");
    }
    diag(i) = ed.sample_variances(i) / static_cast<double>(n);
  }
  // Floor tiny entries so sigma2 R + Sigma_eps stays SPD.
  double mx = diag.maxCoeff();
  if (mx > 0.0) diag = diag.cwiseMax(1e-12 * mx);
  return diag;
}

double sk_log_likelihood(const Eigen::MatrixXd& trend_matrix, const Eigen::VectorXd& beta,
                         const CorrelationParams& params, const Eigen::VectorXd& sigma_eps,
                         const Eigen::VectorXd& sample_means, const Eigen::MatrixXd& points) {
  const Eigen::Index k = trend_matrix.rows();
  if (sample_means.size() != k || sigma_eps.size() != k || points.rows() != k) {
    throw DimensionError("sk_log_likelihood: size mismatch");
  }
  params.validate();
  Eigen::MatrixXd s = params.sigma2 * correlation_matrix(points, params.theta);
  s.diagonal() += sigma_eps;
  SpdFactor f = SpdFactor::compute(s);
  Eigen::VectorXd residual = sample_means - trend_matrix * beta;
  return -0.5 * (static_cast<double>(k) * kLog2Pi + f.log_det() + f.quad_form(residual));
}

SkModel::SkModel(TrendModel trend, ExperimentalDesign ed, CorrelationParams params)
    : trend_(std::move(trend)), ed_(std::move(ed)), params_(std::move(params)) {
  sigma_eps_ = intrinsic_covariance(ed_);
  build();
}

SkModel::SkModel(TrendModel trend, ExperimentalDesign ed, CorrelationParams params,
                 Eigen::VectorXd sigma_eps)
    : trend_(std::move(trend)),
      ed_(std::move(ed)),
      params_(std::move(params)),
      sigma_eps_(std::move(sigma_eps)) {
  if (sigma_eps_.size() != ed_.size()) throw DimensionError("SkModel: sigma_eps size mismatch");
  if ((sigma_eps_.array() < 0.0).any()) {
    throw InvalidArgumentError("SkModel: negative intrinsic variance");
  }
  build();
}

void SkModel::build() {
  params_.validate();
  const Eigen::Index k = ed_.size();
  if (k <= trend_.size()) throw InvalidArgumentError("SkModel: need k > trend size");

  Eigen::MatrixXd s = params_.sigma2 * correlation_matrix(ed_.points, params_.theta);
  s.diagonal() += sigma_eps_;
  sum_factor_ = SpdFactor::compute(s);

  trend_matrix_ = trend_.eval_matrix(ed_.points);
  sinv_f_ = sum_factor_.solve(trend_matrix_);
  gram_llt_.compute(trend_matrix_.transpose() * sinv_f_);
  if (gram_llt_.info() != Eigen::Success) {
    throw IllConditionedError("SkModel: singular GLS normal matrix");
  }
  beta_ = gram_llt_.solve(sinv_f_.transpose() * ed_.sample_means);
  Eigen::VectorXd residual = ed_.sample_means - trend_matrix_ * beta_;
  sum_weights_ = sum_factor_.solve(residual);
  log_likelihood_ = -0.5 * (static_cast<double>(k) * kLog2Pi + sum_factor_.log_det() +
                            residual.dot(sum_weights_));
}

Prediction SkModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != ed_.dimension()) throw DimensionError("predict: point dimension mismatch");
  const Eigen::Index k = ed_.size();

  // Cross-covariance c(x) = sigma2 r(x) between the query and the design.
  Eigen::VectorXd c(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    c(i) = params_.sigma2 * gaussian_correlation(x, ed_.points.row(i).transpose(), params_.theta);
  }
  Eigen::RowVectorXd f = trend_.eval(x);

  double mean = f * beta_ + c.dot(sum_weights_);
  // gamma = f(x) - F' S^-1 c; the last term inflates the MSE for the
  // estimated trend coefficients.
  Eigen::VectorXd gamma = f.transpose() - sinv_f_.transpose() * c;
  double inflation = gamma.dot(gram_llt_.solve(gamma));
  double mse_raw = params_.sigma2 - sum_factor_.quad_form(c) + inflation;
  return finish_prediction(mean, mse_raw);
}

std::pair<double, double> default_sigma2_bounds(const Eigen::VectorXd& sample_means) {
  double mean = sample_means.mean();
  double var = (sample_means.array() - mean).square().sum() /
               std::max<double>(1.0, static_cast<double>(sample_means.size()) - 1.0);
  double v = std::max(var, 1e-12);
  return {std::log10(v) - 6.0, std::log10(v) + 3.0};
}

SkModel fit_sk(const TrendModel& trend, const ExperimentalDesign& ed, GaConfig config) {
  ed.validate();
  const Eigen::Index k = ed.size();
  if (k <= trend.size()) throw InvalidArgumentError("fit_sk: need k > trend size");

  Eigen::VectorXd sigma_eps = intrinsic_covariance(ed);
  Eigen::MatrixXd trend_matrix = trend.eval_matrix(ed.points);

  if (config.bounds.empty()) {
    config.bounds = default_theta_bounds(ed.points);
    config.bounds.push_back(default_sigma2_bounds(ed.sample_means));
  }
  const int m = static_cast<int>(ed.dimension());
  if (static_cast<int>(config.bounds.size()) != m + 1) {
    throw InvalidArgumentError("fit_sk: bounds must cover theta genes plus sigma2");
  }

  // Distance matrices cached once; each candidate costs one exp-map and one
  // Cholesky.
  std::vector<Eigen::MatrixXd> dist2(static_cast<std::size_t>(m));
  for (int c = 0; c < m; ++c) {
    Eigen::VectorXd col = ed.points.col(c);
    Eigen::MatrixXd diff = col.replicate(1, k) - col.transpose().replicate(k, 1);
    dist2[static_cast<std::size_t>(c)] = diff.cwiseProduct(diff);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();

  auto objective = [&](const Eigen::VectorXd& genes) -> double {
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(k, k);
    for (int c = 0; c < m; ++c) {
      d2.noalias() += std::pow(10.0, genes(c)) * dist2[static_cast<std::size_t>(c)];
    }
    double sigma2 = std::pow(10.0, genes(m));
    Eigen::MatrixXd s = sigma2 * (-d2.array()).exp().matrix();
    s.diagonal() += sigma_eps;
    SpdFactor f = SpdFactor::try_compute(s);
    if (!f.valid()) return nan;

    Eigen::MatrixXd sinv_f = f.solve(trend_matrix);
    Eigen::LLT<Eigen::MatrixXd> gram(trend_matrix.transpose() * sinv_f);
    if (gram.info() != Eigen::Success) return nan;
    Eigen::VectorXd beta = gram.solve(sinv_f.transpose() * ed.sample_means);
    Eigen::VectorXd residual = ed.sample_means - trend_matrix * beta;
    return -0.5 * (static_cast<double>(k) * kLog2Pi + f.log_det() + f.quad_form(residual));
  };

  GaResult best = ga_maximize(objective, config);
  CorrelationParams params;
  params.theta = Eigen::pow(10.0, best.genes.head(m).array());
  params.sigma2 = std::pow(10.0, best.genes(m));
  return SkModel(trend, ed, params, sigma_eps);
}

Prediction predict_sk(const SkModel& model, const Eigen::VectorXd& x) {
  return model.predict(x);
}

LarPceSkResult fit_lar_pce_sk(const ExperimentalDesign& ed, const InputScaling& domain,
                              int max_degree, double q_norm, GaConfig config,
                              std::size_t cardinality_cap) {
  ed.validate();
  if (domain.dimension() != ed.dimension()) {
    throw DimensionError("fit_lar_pce_sk: domain/design dimension mismatch");
  }
  PceBasis candidates = enumerate_basis(static_cast<int>(ed.dimension()), max_degree, q_norm,
                                        {}, cardinality_cap);
  Eigen::MatrixXd canonical = domain.to_canonical(ed.points);
  SparseSelection sel = select_sparse_basis(candidates, canonical, ed.sample_means, domain);

  TrendModel trend = TrendModel::lar_pce(sel.basis, domain);
  SkModel model = fit_sk(trend, ed, std::move(config));
  return LarPceSkResult{std::move(model), std::move(sel.basis), std::move(sel.path)};
}

}  // namespace stokrig
