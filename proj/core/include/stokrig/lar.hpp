#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "stokrig/polychaos.hpp"

namespace stokrig {

/// One step of the least-angle path: the active predictor set after the
/// step's equiangular move, the coefficients in standardized predictor space,
/// and (once scored) the LOO error of the hybrid OLS refit on that set.
struct LarStep {
  std::vector<int> active;           // candidate indices, insertion order
  Eigen::VectorXd coefficients;      // standardized-space, aligned with race columns
  double max_abs_correlation = 0.0;  // common |correlation| at the step start
  double loo_error = std::numeric_limits<double>::quiet_NaN();
};

/// Full least-angle path over a candidate set. Active sets are nested and
/// grow by exactly one index per step; the step count is bounded by
/// min(P, k-1).
struct LarPath {
  std::vector<LarStep> steps;
  std::vector<int> race_columns;     // candidate indices that entered the race
  std::vector<int> excluded_columns; // zero-variance candidates left out
  Eigen::VectorXd column_means;      // standardization of the race columns
  Eigen::VectorXd column_norms;
  int selected = -1;                 // LOO-minimizing step, -1 until scored
};

/// Runs least-angle regression over the candidate basis evaluated at the
/// (canonical-domain) points. Predictors are standardized to zero mean and
/// unit norm; y is centered internally. Zero-variance columns (the constant
/// term among them) are excluded from the race and reported in the path.
/// Stops after min(P, k-1) steps or when the residual correlation falls
/// below `correlation_tol`. Throws InvalidArgumentError on an empty candidate
/// set or k < 2.
LarPath lar_path(const PceBasis& candidates, const Eigen::MatrixXd& points,
                 const Eigen::VectorXd& y, double correlation_tol = 1e-12);

/// Matrix variant used by tests and callers that already hold the predictor
/// matrix; column j of `predictors` is candidate j.
LarPath lar_path(const Eigen::MatrixXd& predictors, const Eigen::VectorXd& y,
                 double correlation_tol = 1e-12);

/// Result of LOO-based model selection along a LAR path: the sparse basis
/// (constant term always retained), its OLS-refit model, and the scored path.
struct SparseSelection {
  PceBasis basis;
  PceModel model;
  LarPath path;
};

/// Hybrid LAR selection: runs the path, re-fits each step's active set by
/// ordinary least squares (selection by LAR, calibration by least squares),
/// scores each refit with the closed-form LOO error, and returns the
/// minimizer. Degenerate-leverage steps are skipped; if every candidate is
/// degenerate and the constant model does not reproduce y, throws
/// SelectionError.
SparseSelection select_sparse_basis(const PceBasis& candidates, const Eigen::MatrixXd& points,
                                    const Eigen::VectorXd& y, const InputScaling& scaling);

}  // namespace stokrig
