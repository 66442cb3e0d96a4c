#include "stokrig/trend.hpp"

namespace stokrig {

TrendModel TrendModel::constant(int dimension) {
  TrendModel t;
  t.kind = Kind::Constant;
  t.basis.dimension = dimension;
  t.scaling = InputScaling::identity(dimension);
  return t;
}

TrendModel TrendModel::full_pce(PceBasis basis, InputScaling scaling) {
  if (basis.size() == 0) throw InvalidArgumentError("TrendModel: empty basis");
  if (scaling.dimension() != basis.dimension) {
    throw DimensionError("TrendModel: scaling/basis dimension mismatch");
  }
  TrendModel t;
  t.kind = Kind::FullPce;
  t.basis = std::move(basis);
  t.scaling = std::move(scaling);
  return t;
}

TrendModel TrendModel::lar_pce(PceBasis basis, InputScaling scaling) {
  TrendModel t = full_pce(std::move(basis), std::move(scaling));
  t.kind = Kind::LarPce;
  return t;
}

int TrendModel::dimension() const { return basis.dimension; }

int TrendModel::size() const {
  return kind == Kind::Constant ? 1 : static_cast<int>(basis.size());
}

Eigen::RowVectorXd TrendModel::eval(const Eigen::VectorXd& x) const {
  if (kind == Kind::Constant) {
    if (x.size() != basis.dimension) throw DimensionError("TrendModel: point dimension mismatch");
    return Eigen::RowVectorXd::Ones(1);
  }
  Eigen::VectorXd t = scaling.to_canonical(x);
  Eigen::RowVectorXd f(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    f(static_cast<Eigen::Index>(j)) = eval_basis_term(basis, j, t);
  }
  return f;
}

Eigen::MatrixXd TrendModel::eval_matrix(const Eigen::MatrixXd& points) const {
  if (kind == Kind::Constant) {
    if (points.cols() != basis.dimension) {
      throw DimensionError("TrendModel: points dimension mismatch");
    }
    return Eigen::MatrixXd::Ones(points.rows(), 1);
  }
  return information_matrix(basis, scaling.to_canonical(points));
}

}  // namespace stokrig
