#include "stokrig/polychaos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stokrig {

int MultiIndex::total_degree() const {
  int d = 0;
  for (int a : alpha) d += a;
  return d;
}

bool graded_less(const MultiIndex& a, const MultiIndex& b) {
  int da = a.total_degree();
  int db = b.total_degree();
  if (da != db) return da < db;
  return a.alpha < b.alpha;
}

InputScaling InputScaling::identity(int dimension) {
  InputScaling s;
  s.lo = Eigen::VectorXd::Constant(dimension, -1.0);
  s.hi = Eigen::VectorXd::Constant(dimension, 1.0);
  return s;
}

InputScaling InputScaling::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size()) throw DimensionError("InputScaling: lo/hi size mismatch");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo(i) < hi(i))) throw InvalidArgumentError("InputScaling: empty interval");
  }
  InputScaling s;
  s.lo = lo;
  s.hi = hi;
  return s;
}

bool InputScaling::is_identity() const {
  return (lo.array() == -1.0).all() && (hi.array() == 1.0).all();
}

Eigen::VectorXd InputScaling::to_canonical(const Eigen::VectorXd& x) const {
  if (x.size() != lo.size()) throw DimensionError("InputScaling: point dimension mismatch");
  return (2.0 * (x - lo).array() / (hi - lo).array() - 1.0).matrix();
}

Eigen::MatrixXd InputScaling::to_canonical(const Eigen::MatrixXd& points) const {
  if (points.cols() != lo.size()) throw DimensionError("InputScaling: points dimension mismatch");
  Eigen::MatrixXd out(points.rows(), points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    out.col(j) = 2.0 * (points.col(j).array() - lo(j)) / (hi(j) - lo(j)) - 1.0;
  }
  return out;
}

namespace {

// ||alpha||_q^q <= p^q with absolute slack on the q-th powers.
bool hyperbolic_member(const std::vector<int>& alpha, int p, double q) {
  double s = 0.0;
  for (int a : alpha) {
    if (a > 0) s += std::pow(static_cast<double>(a), q);
  }
  return std::pow(s, 1.0 / q) <= static_cast<double>(p) + 1e-12;
}

// All compositions of `total` into `m` parts, appended to `out` (already
// lexicographically ascending for a fixed total when generated this way).
void compositions(int total, int m, std::vector<int>& scratch, int pos,
                  std::vector<MultiIndex>& out) {
  if (pos == m - 1) {
    scratch[pos] = total;
    out.push_back(MultiIndex{scratch});
    return;
  }
  for (int v = 0; v <= total; ++v) {
    scratch[pos] = v;
    compositions(total - v, m, scratch, pos + 1, out);
  }
}

}  // namespace

PceBasis enumerate_basis(int dimension, int max_degree, double q_norm,
                         const std::vector<PolynomialFamily>& families,
                         std::size_t cardinality_cap) {
  if (dimension < 1) throw InvalidArgumentError("enumerate_basis: dimension must be >= 1");
  if (max_degree < 0) throw InvalidArgumentError("enumerate_basis: max degree must be >= 0");
  if (!(q_norm > 0.0) || q_norm > 1.0) {
    throw InvalidArgumentError("enumerate_basis: q must lie in (0, 1]");
  }

  PceBasis basis;
  basis.dimension = dimension;
  basis.max_degree = max_degree;
  basis.q_norm = q_norm;
  if (families.empty()) {
    basis.families.assign(dimension, PolynomialFamily::LegendreUniform);
  } else if (families.size() == 1) {
    basis.families.assign(dimension, families[0]);
  } else if (static_cast<int>(families.size()) == dimension) {
    basis.families = families;
  } else {
    throw DimensionError("enumerate_basis: families must have size 1 or M");
  }

  std::vector<int> scratch(dimension, 0);
  for (int degree = 0; degree <= max_degree; ++degree) {
    std::vector<MultiIndex> layer;
    compositions(degree, dimension, scratch, 0, layer);
    std::sort(layer.begin(), layer.end(),
              [](const MultiIndex& a, const MultiIndex& b) { return a.alpha < b.alpha; });
    for (auto& mi : layer) {
      if (q_norm < 1.0 && !hyperbolic_member(mi.alpha, max_degree, q_norm)) continue;
      basis.indices.push_back(std::move(mi));
      if (basis.indices.size() > cardinality_cap) {
        throw InvalidArgumentError("enumerate_basis: cardinality exceeds cap of " +
                                   std::to_string(cardinality_cap));
      }
    }
  }
  return basis;
}

double eval_univariate(PolynomialFamily family, int degree, double x) {
  if (degree < 0) throw InvalidArgumentError("eval_univariate: negative degree");
  if (degree == 0) return 1.0;

  // Orthonormal three-term recurrence x*psi_n = a_{n+1} psi_{n+1} + a_n psi_{n-1}
  // with a_n = n / sqrt(4n^2 - 1) (Legendre, uniform weight) or a_n = sqrt(n)
  // (probabilists' Hermite, standard-normal weight).
  auto coeff = [family](int n) {
    if (family == PolynomialFamily::LegendreUniform) {
      double nn = static_cast<double>(n);
      return nn / std::sqrt(4.0 * nn * nn - 1.0);
    }
    return std::sqrt(static_cast<double>(n));
  };

  double prev = 1.0;                 // psi_0
  double cur = x / coeff(1);         // psi_1
  for (int n = 1; n < degree; ++n) {
    double next = (x * cur - coeff(n) * prev) / coeff(n + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double eval_basis_term(const PceBasis& basis, std::size_t term, const Eigen::VectorXd& x) {
  const MultiIndex& mi = basis.indices.at(term);
  if (x.size() != basis.dimension) throw DimensionError("eval_basis_term: point dimension mismatch");
  double v = 1.0;
  for (int d = 0; d < basis.dimension; ++d) {
    if (mi.alpha[d] > 0) v *= eval_univariate(basis.families[d], mi.alpha[d], x(d));
  }
  return v;
}

Eigen::MatrixXd information_matrix(const PceBasis& basis, const Eigen::MatrixXd& points) {
  if (points.cols() != basis.dimension) {
    throw DimensionError("information_matrix: points have dimension " +
                         std::to_string(points.cols()) + ", basis expects " +
                         std::to_string(basis.dimension));
  }
  const Eigen::Index k = points.rows();
  const Eigen::Index p = static_cast<Eigen::Index>(basis.size());

  // Univariate values cached per (dimension, degree) so each column is a
  // product lookup rather than a recurrence from scratch.
  std::vector<Eigen::MatrixXd> uni(basis.dimension);
  std::vector<int> max_deg(basis.dimension, 0);
  for (const auto& mi : basis.indices) {
    for (int d = 0; d < basis.dimension; ++d) max_deg[d] = std::max(max_deg[d], mi.alpha[d]);
  }
  for (int d = 0; d < basis.dimension; ++d) {
    uni[d].resize(k, max_deg[d] + 1);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (int deg = 0; deg <= max_deg[d]; ++deg) {
        uni[d](i, deg) = eval_univariate(basis.families[d], deg, points(i, d));
      }
    }
  }

  Eigen::MatrixXd psi = Eigen::MatrixXd::Ones(k, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto& alpha = basis.indices[j].alpha;
    for (int d = 0; d < basis.dimension; ++d) {
      if (alpha[d] > 0) psi.col(j).array() *= uni[d].col(alpha[d]).array();
    }
  }
  return psi;
}

double PceModel::eval(const Eigen::VectorXd& x_physical) const {
  Eigen::VectorXd t = scaling.to_canonical(x_physical);
  double v = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    v += coefficients(static_cast<Eigen::Index>(j)) * eval_basis_term(basis, j, t);
  }
  return v;
}

PceModel fit_ols(const PceBasis& basis, const Eigen::MatrixXd& points,
                 const Eigen::VectorXd& y, const InputScaling& scaling) {
  const Eigen::Index k = points.rows();
  const Eigen::Index p = static_cast<Eigen::Index>(basis.size());
  if (y.size() != k) throw DimensionError("fit_ols: y length does not match point count");
  if (k < p) throw InvalidArgumentError("fit_ols: fewer points than basis terms");

  Eigen::MatrixXd psi = information_matrix(basis, points);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(psi);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    // Columns permuted past the numerical rank are the dependent ones.
    std::string cols;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = qr.rank(); j < p; ++j) {
      if (!cols.empty()) cols += ", ";
      cols += std::to_string(perm(j));
    }
    throw IllConditionedError("fit_ols: rank-deficient information matrix (columns " + cols + ")");
  }

  PceModel model;
  model.basis = basis;
  model.scaling = scaling;
  model.coefficients = qr.solve(y);
  try {
    model.loo_error = loo_error(basis, points, y, model);
  } catch (const LooError&) {
    // Square/near-interpolating fits have no defined LOO score.
    model.loo_error = std::numeric_limits<double>::infinity();
  }
  return model;
}

double loo_error(const PceBasis& basis, const Eigen::MatrixXd& points,
                 const Eigen::VectorXd& y, const PceModel& model, double leverage_tol) {
  const Eigen::Index k = points.rows();
  Eigen::MatrixXd psi = information_matrix(basis, points);
  if (psi.cols() != model.coefficients.size()) {
    throw DimensionError("loo_error: coefficient/basis size mismatch");
  }

  // Hat diagonal h_i = ||row_i(Q)||^2 from a thin QR of Psi.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(psi);
  Eigen::MatrixXd thin_q = qr.householderQ() * Eigen::MatrixXd::Identity(k, psi.cols());
  Eigen::VectorXd h = thin_q.rowwise().squaredNorm();

  Eigen::VectorXd residual = y - psi * model.coefficients;
  double num = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (h(i) >= 1.0 - leverage_tol) {
      throw LooError("loo_error: leverage ~1 at point " + std::to_string(i) +
                     " (near-interpolation)");
    }
    double t = residual(i) / (1.0 - h(i));
    num += t * t;
  }
  double mean_y = y.mean();
  double denom = (y.array() - mean_y).square().sum();
  if (denom <= 0.0) {
    throw LooError("loo_error: constant response, LOO undefined");
  }
  return num / denom;
}

}  // namespace stokrig
