#include "stokrig/spd.hpp"

#include <cmath>

namespace stokrig {

namespace {

bool finite_log_det(const Eigen::LLT<Eigen::MatrixXd>& llt, double& out) {
  double s = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    double d = l(i, i);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    s += std::log(d);
  }
  out = 2.0 * s;
  return std::isfinite(out);
}

}  // namespace

SpdFactor SpdFactor::try_compute(const Eigen::MatrixXd& a, const NuggetPolicy& policy) {
  SpdFactor f;
  if (a.rows() != a.cols() || a.rows() == 0) return f;
  if (!a.allFinite()) return f;

  const double mean_diag = a.diagonal().mean();
  const double scale = mean_diag > 0.0 ? mean_diag : 1.0;

  for (double nug = policy.initial; nug <= policy.max * (1.0 + 1e-15); nug *= policy.factor) {
    Eigen::MatrixXd reg = a;
    reg.diagonal().array() += nug * scale;
    f.llt_.compute(reg);
    double ld = 0.0;
    if (f.llt_.info() == Eigen::Success && finite_log_det(f.llt_, ld)) {
      f.log_det_ = ld;
      f.nugget_ = nug * scale;
      f.valid_ = true;
      return f;
    }
  }
  f.valid_ = false;
  return f;
}

SpdFactor SpdFactor::compute(const Eigen::MatrixXd& a, const NuggetPolicy& policy) {
  SpdFactor f = try_compute(a, policy);
  if (!f.valid()) {
    throw IllConditionedError("matrix is not SPD even at the maximum nugget");
  }
  return f;
}

}  // namespace stokrig
