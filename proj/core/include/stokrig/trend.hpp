#pragma once

#include <Eigen/Dense>

#include "stokrig/polychaos.hpp"

namespace stokrig {

/// The deterministic regression part of a Kriging surrogate. Ordinary
/// (Stochastic) Kriging uses the constant trend; the universal variants carry
/// a PCE basis, either the full truncation or the LAR-selected sparse subset.
struct TrendModel {
  enum class Kind { Constant, FullPce, LarPce };

  Kind kind = Kind::Constant;
  PceBasis basis;        // empty for Constant
  InputScaling scaling;  // physical -> canonical map for basis evaluation

  static TrendModel constant(int dimension);
  static TrendModel full_pce(PceBasis basis, InputScaling scaling);
  static TrendModel lar_pce(PceBasis basis, InputScaling scaling);

  int dimension() const;
  /// Number of regression functions s.
  int size() const;

  /// Row vector f(x)^T at a physical-domain point.
  Eigen::RowVectorXd eval(const Eigen::VectorXd& x) const;
  /// k x s trend matrix at physical-domain points.
  Eigen::MatrixXd eval_matrix(const Eigen::MatrixXd& points) const;
};

}  // namespace stokrig
