#pragma once

#include <vector>

#include <Eigen/Dense>

#include "stokrig/ga.hpp"
#include "stokrig/kriging.hpp"
#include "stokrig/lar.hpp"
#include "stokrig/spd.hpp"
#include "stokrig/trend.hpp"

namespace stokrig {

/// Replicated experimental design: k design points with per-point replication
/// counts, response sample means, and sample variances (estimated from the
/// replications, or externally supplied in the known-noise protocol).
struct ExperimentalDesign {
  Eigen::MatrixXd points;                        // k x M
  std::vector<int> replications;                 // n_i >= 1
  Eigen::VectorXd sample_means;                  // mean over replications
  Eigen::VectorXd sample_variances;              // V_i
  bool variances_supplied = false;               // known-noise protocol
  std::vector<std::vector<double>> raw_outputs;  // optional per-replication values

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dimension() const { return points.cols(); }

  /// Builds the design from per-point replication outputs; computes n_i,
  /// means, and (for n_i >= 2) unbiased sample variances.
  static ExperimentalDesign from_raw(Eigen::MatrixXd points,
                                     std::vector<std::vector<double>> outputs);

  /// Known-noise protocol: one response value per point with an externally
  /// supplied variance.
  static ExperimentalDesign with_known_variances(Eigen::MatrixXd points,
                                                 Eigen::VectorXd means,
                                                 Eigen::VectorXd variances);

  /// Checks the structural invariants; throws on violation.
  void validate() const;
};

/// Diagonal of the intrinsic covariance: Var(mean noise at point i) = V_i/n_i
/// (supplied variances are used as-is, which coincides with V_i/1 in the
/// single-replication known-noise protocol). Entries below 1e-12 x max are
/// floored there. Throws InsufficientReplicationError when some point has
/// n_i = 1 and no supplied variance.
Eigen::VectorXd intrinsic_covariance(const ExperimentalDesign& ed);

/// Log-likelihood of the sample means under trend + GP + intrinsic noise:
/// -1/2 [k log 2pi + logdet(S) + (m - F b)' S^-1 (m - F b)] with
/// S = sigma2 R(theta) + diag(sigma_eps). Computed via Cholesky, never an
/// explicit inverse. Throws IllConditionedError when S cannot be factorized.
double sk_log_likelihood(const Eigen::MatrixXd& trend_matrix, const Eigen::VectorXd& beta,
                         const CorrelationParams& params, const Eigen::VectorXd& sigma_eps,
                         const Eigen::VectorXd& sample_means, const Eigen::MatrixXd& points);

/// Fitted Stochastic Kriging surrogate. Immutable after construction;
/// concurrent prediction is safe.
class SkModel {
public:
  /// Builds the model at fixed (theta, sigma2): intrinsic covariance from the
  /// design, GLS beta, cached factorizations.
  SkModel(TrendModel trend, ExperimentalDesign ed, CorrelationParams params);

  /// Same, but with an explicit intrinsic-covariance diagonal (used by
  /// deserialization and the degenerate-limit tests).
  SkModel(TrendModel trend, ExperimentalDesign ed, CorrelationParams params,
          Eigen::VectorXd sigma_eps);

  Prediction predict(const Eigen::VectorXd& x) const;

  double log_likelihood() const { return log_likelihood_; }
  const TrendModel& trend() const { return trend_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  const CorrelationParams& params() const { return params_; }
  const Eigen::VectorXd& sigma_eps() const { return sigma_eps_; }
  const ExperimentalDesign& ed() const { return ed_; }
  double nugget() const { return sum_factor_.nugget(); }

private:
  void build();

  TrendModel trend_;
  ExperimentalDesign ed_;
  CorrelationParams params_;
  Eigen::VectorXd sigma_eps_;
  SpdFactor sum_factor_;          // sigma2 R + diag(sigma_eps)
  Eigen::MatrixXd trend_matrix_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd sum_weights_;   // S^-1 (m - F beta)
  Eigen::MatrixXd sinv_f_;        // S^-1 F
  Eigen::LLT<Eigen::MatrixXd> gram_llt_;  // F' S^-1 F
  double log_likelihood_ = 0.0;
};

/// Default log10-sigma2 search interval: [log10 v - 6, log10 v + 3] around
/// the sample-mean variance v of the responses.
std::pair<double, double> default_sigma2_bounds(const Eigen::VectorXd& sample_means);

/// Joint (theta, sigma2) maximum-likelihood fit via the genetic optimizer,
/// with beta profiled out by GLS at every candidate. Genes are log10(theta_d)
/// and log10(sigma2); bounds auto-derived when the config leaves them empty.
SkModel fit_sk(const TrendModel& trend, const ExperimentalDesign& ed, GaConfig config = {});

Prediction predict_sk(const SkModel& model, const Eigen::VectorXd& x);

/// The composed sparse-trend pipeline: enumerate the hyperbolic candidate
/// basis, select the sparse trend on the sample means by LAR + LOO, then fit
/// Stochastic Kriging with the selected trend.
struct LarPceSkResult {
  SkModel model;
  PceBasis selected_basis;
  LarPath path;
};

LarPceSkResult fit_lar_pce_sk(const ExperimentalDesign& ed, const InputScaling& domain,
                              int max_degree, double q_norm, GaConfig config = {},
                              std::size_t cardinality_cap = 10000);

}  // namespace stokrig
