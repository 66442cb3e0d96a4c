#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "stokrig/errors.hpp"

namespace stokrig {

/// Classical orthonormal univariate families. Legendre is orthonormal w.r.t.
/// the uniform density on [-1, 1]; Hermite (probabilists') w.r.t. the
/// standard normal density.
enum class PolynomialFamily { LegendreUniform, HermiteGaussian };

/// Multi-dimensional polynomial exponent vector, one entry per input
/// dimension.
struct MultiIndex {
  std::vector<int> alpha;

  int dimension() const { return static_cast<int>(alpha.size()); }
  int total_degree() const;

  bool operator==(const MultiIndex& other) const { return alpha == other.alpha; }
};

/// Graded comparison: ascending total degree, ascending lexicographic within
/// a degree. Fixes the basis ordering so coefficient vectors are comparable
/// across runs.
bool graded_less(const MultiIndex& a, const MultiIndex& b);

/// Per-dimension affine map from a physical box domain onto the family's
/// canonical domain ([-1, 1] for Legendre; identity is the natural choice for
/// Hermite inputs already in standard-normal units).
struct InputScaling {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  static InputScaling identity(int dimension);
  static InputScaling box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

  int dimension() const { return static_cast<int>(lo.size()); }
  bool is_identity() const;

  Eigen::VectorXd to_canonical(const Eigen::VectorXd& x) const;
  /// Row-wise map of a k x M point matrix.
  Eigen::MatrixXd to_canonical(const Eigen::MatrixXd& points) const;
};

/// A truncated multivariate orthonormal basis: the multi-indices retained by
/// the hyperbolic rule ||alpha||_q <= p, ordered gradedly.
struct PceBasis {
  std::vector<PolynomialFamily> families;  // one per input dimension
  std::vector<MultiIndex> indices;
  int dimension = 0;
  int max_degree = 0;
  double q_norm = 1.0;

  std::size_t size() const { return indices.size(); }
};

/// Enumerates the hyperbolic-truncation index set {alpha : ||alpha||_q <= p}
/// in graded order. The q-th-power membership test carries a 1e-12 slack to
/// absorb floating point on the roots. Throws InvalidArgumentError for q
/// outside (0, 1], p < 0, M < 1, or when the cardinality would exceed
/// `cardinality_cap`.
PceBasis enumerate_basis(int dimension, int max_degree, double q_norm,
                         const std::vector<PolynomialFamily>& families = {},
                         std::size_t cardinality_cap = 10000);

/// Value of the orthonormal univariate polynomial of the given degree via the
/// normalized three-term recurrence. Total on the family domain.
double eval_univariate(PolynomialFamily family, int degree, double x);

/// Tensor-product basis value Psi_alpha(x) at a canonical-domain point.
double eval_basis_term(const PceBasis& basis, std::size_t term, const Eigen::VectorXd& x);

/// k x P matrix of basis evaluations at canonical-domain points (one row per
/// point, one column per retained multi-index).
Eigen::MatrixXd information_matrix(const PceBasis& basis, const Eigen::MatrixXd& points);

/// A least-squares PCE surrogate together with its closed-form LOO error and
/// the physical-to-canonical input map it was built with.
struct PceModel {
  PceBasis basis;
  Eigen::VectorXd coefficients;
  double loo_error = 0.0;
  InputScaling scaling;

  /// Prediction at a physical-domain point.
  double eval(const Eigen::VectorXd& x_physical) const;
};

/// Ordinary least squares in the PCE basis via column-pivoted QR (not the
/// normal equations). `points` are canonical-domain. Throws
/// IllConditionedError naming the dependent columns on rank deficiency,
/// InvalidArgumentError when k < P.
PceModel fit_ols(const PceBasis& basis, const Eigen::MatrixXd& points,
                 const Eigen::VectorXd& y, const InputScaling& scaling);

/// Closed-form leave-one-out error of a linear least-squares fit:
///   sum_i (r_i / (1 - h_i))^2 / sum_i (y_i - mean(y))^2
/// with h the hat-matrix diagonal. Throws LooError when some h_i is within
/// `leverage_tol` of 1 (near-interpolation) or when y is constant.
double loo_error(const PceBasis& basis, const Eigen::MatrixXd& points,
                 const Eigen::VectorXd& y, const PceModel& model,
                 double leverage_tol = 1e-10);

}  // namespace stokrig
