#pragma once

#include <Eigen/Dense>

#include "stokrig/errors.hpp"

namespace stokrig {

/// Regularization policy for near-singular covariance matrices: a baseline
/// jitter of 1e-10 x mean(diag) is always added; on factorization failure it
/// is escalated by x10 up to 1e-6 x mean(diag).
struct NuggetPolicy {
  double initial = 1e-10;
  double max = 1e-6;
  double factor = 10.0;
};

/// Cholesky factorization of an SPD matrix with the shared nugget policy.
/// Holds the factor, the log-determinant, and the nugget actually applied.
class SpdFactor {
public:
  SpdFactor() = default;

  /// Factorizes A + nugget*mean(diag(A))*I, escalating the nugget per the
  /// policy. Throws IllConditionedError if the matrix cannot be factorized
  /// at the maximum nugget.
  static SpdFactor compute(const Eigen::MatrixXd& a, const NuggetPolicy& policy = {});

  /// Same, but returns an invalid factor instead of throwing (for optimizer
  /// fitness loops where failure means an infeasible candidate).
  static SpdFactor try_compute(const Eigen::MatrixXd& a, const NuggetPolicy& policy = {});

  bool valid() const { return valid_; }
  double log_det() const { return log_det_; }
  double nugget() const { return nugget_; }
  Eigen::Index rows() const { return llt_.matrixLLT().rows(); }

  template <typename Derived>
  auto solve(const Eigen::MatrixBase<Derived>& b) const {
    return llt_.solve(b.derived()).eval();
  }

  /// b' A^{-1} b via one triangular solve.
  template <typename Derived>
  double quad_form(const Eigen::MatrixBase<Derived>& b) const {
    return llt_.matrixL().solve(b.derived()).squaredNorm();
  }

  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }

private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0.0;
  double nugget_ = 0.0;
  bool valid_ = false;
};

}  // namespace stokrig
