#include "stokrig/lar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stokrig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Incremental Cholesky of the active Gram matrix. Appending column s of
// G costs O(s^2); a non-positive pivot means the new predictor is linearly
// dependent on the active set.
class GrowingCholesky {
public:
  explicit GrowingCholesky(int capacity) : l_(capacity, capacity), n_(0) {}

  bool append(const Eigen::VectorXd& gram_col, double gram_diag) {
    if (n_ > 0) {
      Eigen::VectorXd w =
          l_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>().solve(gram_col.head(n_));
      double d = gram_diag - w.squaredNorm();
      if (d <= 1e-12) return false;
      l_.row(n_).head(n_) = w;
      l_(n_, n_) = std::sqrt(d);
    } else {
      if (gram_diag <= 1e-12) return false;
      l_(0, 0) = std::sqrt(gram_diag);
    }
    ++n_;
    return true;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    Eigen::VectorXd t = l_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>().solve(b);
    return l_.topLeftCorner(n_, n_).transpose().triangularView<Eigen::Upper>().solve(t);
  }

private:
  Eigen::MatrixXd l_;
  int n_;
};

}  // namespace

LarPath lar_path(const Eigen::MatrixXd& predictors, const Eigen::VectorXd& y,
                 double correlation_tol) {
  const Eigen::Index k = predictors.rows();
  const Eigen::Index p_all = predictors.cols();
  if (p_all == 0) throw InvalidArgumentError("lar_path: empty candidate set");
  if (k < 2 || y.size() != k) throw InvalidArgumentError("lar_path: need k >= 2 matching rows");

  LarPath path;

  // Standardize to zero mean / unit norm; constant columns cannot be
  // standardized and sit out the race.
  std::vector<int> race;
  std::vector<double> means, norms;
  for (Eigen::Index j = 0; j < p_all; ++j) {
    double mean = predictors.col(j).mean();
    double norm = (predictors.col(j).array() - mean).matrix().norm();
    if (norm <= 1e-13 * std::max(1.0, std::abs(mean)) * std::sqrt(double(k))) {
      path.excluded_columns.push_back(static_cast<int>(j));
    } else {
      race.push_back(static_cast<int>(j));
      means.push_back(mean);
      norms.push_back(norm);
    }
  }
  const int p = static_cast<int>(race.size());
  path.race_columns = race;
  path.column_means = Eigen::Map<Eigen::VectorXd>(means.data(), p);
  path.column_norms = Eigen::Map<Eigen::VectorXd>(norms.data(), p);
  if (p == 0) return path;  // nothing to race; caller falls back to the constant model

  Eigen::MatrixXd x(k, p);
  for (int j = 0; j < p; ++j) {
    x.col(j) = (predictors.col(race[j]).array() - means[j]) / norms[j];
  }
  Eigen::VectorXd yc = y.array() - y.mean();

  const int max_steps = std::min<int>(p, static_cast<int>(k) - 1);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  std::vector<int> active;
  std::vector<double> signs;
  std::vector<char> is_active(p, 0);
  GrowingCholesky chol(max_steps);
  Eigen::MatrixXd xa(k, max_steps);  // sign-adjusted active columns

  for (int step = 0; step < max_steps; ++step) {
    Eigen::VectorXd c = x.transpose() * (yc - mu);

    // Next entrant: largest |correlation| among inactive, ties to the lowest
    // candidate order.
    int j_new = -1;
    double c_max = 0.0;
    for (int j = 0; j < p; ++j) {
      if (is_active[j]) continue;
      double a = std::abs(c(j));
      if (a > c_max) {
        c_max = a;
        j_new = j;
      }
    }
    if (j_new < 0 || c_max < correlation_tol) break;

    double sign = c(j_new) >= 0.0 ? 1.0 : -1.0;
    Eigen::VectorXd col = sign * x.col(j_new);
    Eigen::VectorXd gram_col(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) gram_col(i) = xa.col(i).dot(col);
    if (!chol.append(gram_col, col.squaredNorm())) break;  // collinear entrant; path ends
    xa.col(static_cast<Eigen::Index>(active.size())) = col;
    active.push_back(j_new);
    signs.push_back(sign);
    is_active[j_new] = 1;
    const int s = static_cast<int>(active.size());

    // Equiangular direction u = X_A w with w = A_A G^{-1} 1.
    Eigen::VectorXd ginv1 = chol.solve(Eigen::VectorXd::Ones(s));
    double denom = ginv1.sum();
    if (denom <= 0.0) break;
    double a_a = 1.0 / std::sqrt(denom);
    Eigen::VectorXd w = a_a * ginv1;
    Eigen::VectorXd u = xa.leftCols(s) * w;
    Eigen::VectorXd a = x.transpose() * u;

    // Smallest positive move admitting a new index; the full least-squares
    // step when every predictor is already active.
    double gamma = c_max / a_a;
    for (int j = 0; j < p; ++j) {
      if (is_active[j]) continue;
      for (double cand : {(c_max - c(j)) / (a_a - a(j)), (c_max + c(j)) / (a_a + a(j))}) {
        if (std::isfinite(cand) && cand > 1e-14 && cand < gamma) gamma = cand;
      }
    }

    for (int i = 0; i < s; ++i) beta(active[i]) += gamma * signs[i] * w(i);
    mu += gamma * u;

    LarStep rec;
    rec.active = active;
    rec.coefficients = beta;
    rec.max_abs_correlation = c_max;
    path.steps.push_back(std::move(rec));
  }
  return path;
}

LarPath lar_path(const PceBasis& candidates, const Eigen::MatrixXd& points,
                 const Eigen::VectorXd& y, double correlation_tol) {
  return lar_path(information_matrix(candidates, points), y, correlation_tol);
}

SparseSelection select_sparse_basis(const PceBasis& candidates, const Eigen::MatrixXd& points,
                                    const Eigen::VectorXd& y, const InputScaling& scaling) {
  if (candidates.size() == 0) throw InvalidArgumentError("select_sparse_basis: empty candidates");
  const Eigen::Index k = points.rows();

  auto subbasis = [&](const std::vector<int>& terms) {
    PceBasis b;
    b.families = candidates.families;
    b.dimension = candidates.dimension;
    b.max_degree = candidates.max_degree;
    b.q_norm = candidates.q_norm;
    for (int t : terms) b.indices.push_back(candidates.indices[static_cast<std::size_t>(t)]);
    return b;
  };

  // Locate the constant term; it is reinstated in every refit.
  int const_term = -1;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (candidates.indices[j].total_degree() == 0) {
      const_term = static_cast<int>(j);
      break;
    }
  }

  const double y_scatter = (y.array() - y.mean()).square().sum();
  if (const_term >= 0 && y_scatter <= 1e-24 * static_cast<double>(k) * std::max(1.0, y.mean() * y.mean())) {
    // Constant response: the constant model is exact, nothing to race.
    SparseSelection sel;
    sel.basis = subbasis({const_term});
    sel.model.basis = sel.basis;
    sel.model.scaling = scaling;
    sel.model.coefficients = Eigen::VectorXd::Constant(1, y.mean());
    sel.model.loo_error = 0.0;
    return sel;
  }

  Eigen::MatrixXd psi = information_matrix(candidates, points);
  SparseSelection sel;
  sel.path = lar_path(psi, y);

  // Candidate models: the constant alone, then each path step's active set
  // plus the constant. Each is refit by OLS and scored by the closed-form
  // LOO with the finite-sample correction k/(k-P) (1 + tr[(Psi'Psi)^-1]),
  // which penalizes cardinalities approaching the design size; the stored
  // loo_error stays the uncorrected closed form. Degenerate-leverage refits
  // are skipped.
  struct Scored {
    std::vector<int> terms;  // candidate indices, graded order
    PceModel model;
    double score;
    int step;  // -1 for the constant-only model
  };
  std::vector<Scored> scored;

  auto try_score = [&](std::vector<int> terms, int step) {
    std::sort(terms.begin(), terms.end());
    PceBasis b = subbasis(terms);
    const Eigen::Index p = static_cast<Eigen::Index>(b.size());
    if (p >= k) return;  // no LOO head-room
    try {
      PceModel m = fit_ols(b, points, y, scaling);
      if (!std::isfinite(m.loo_error)) return;
      Eigen::MatrixXd psi_active = information_matrix(b, points);
      double trace = (psi_active.transpose() * psi_active).inverse().trace();
      double correction = (static_cast<double>(k) / static_cast<double>(k - p)) * (1.0 + trace);
      scored.push_back(Scored{std::move(terms), std::move(m), 0.0, step});
      scored.back().score = scored.back().model.loo_error * correction;
    } catch (const Error&) {
      // rank-deficient or degenerate refit: not a viable candidate
    }
  };

  if (const_term >= 0) try_score({const_term}, -1);
  for (std::size_t s = 0; s < sel.path.steps.size(); ++s) {
    std::vector<int> terms;
    if (const_term >= 0) terms.push_back(const_term);
    for (int r : sel.path.steps[s].active) terms.push_back(sel.path.race_columns[r]);
    try_score(std::move(terms), static_cast<int>(s));
  }

  if (scored.empty()) {
    throw SelectionError("select_sparse_basis: no admissible model along the path");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scored.size(); ++i) {
    if (scored[i].score < scored[best].score) best = i;
  }
  // Record per-step uncorrected LOO on the path for diagnostics.
  for (const auto& sc : scored) {
    if (sc.step >= 0) {
      sel.path.steps[static_cast<std::size_t>(sc.step)].loo_error = sc.model.loo_error;
    }
  }
  sel.path.selected = scored[best].step;
  sel.basis = std::move(scored[best].model.basis);
  sel.model.basis = sel.basis;
  sel.model.scaling = scored[best].model.scaling;
  sel.model.coefficients = std::move(scored[best].model.coefficients);
  sel.model.loo_error = scored[best].model.loo_error;
  return sel;
}

}  // namespace stokrig
