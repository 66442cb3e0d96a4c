#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stokrig/kriging.hpp"
#include "stokrig/rng.hpp"

using namespace stokrig;

namespace {

GaConfig quick_ga(std::uint64_t seed) {
  GaConfig cfg;
  cfg.seed = seed;
  return cfg;
}

Eigen::MatrixXd random_points(int k, int m, rng::Engine& eng, double lo = 0.0, double hi = 1.0) {
  Eigen::MatrixXd pts(k, m);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < m; ++j) pts(i, j) = rng::uniform(eng, lo, hi);
  }
  return pts;
}

// Exact GP draw: y ~ N(0, sigma2 R(theta)) via the Cholesky of the dense R.
Eigen::VectorXd gp_draw(const Eigen::MatrixXd& pts, double theta, double sigma2,
                        rng::Engine& eng) {
  Eigen::VectorXd tv = Eigen::VectorXd::Constant(pts.cols(), theta);
  Eigen::MatrixXd r = correlation_matrix(pts, tv);
  r.diagonal().array() += 1e-10;
  Eigen::LLT<Eigen::MatrixXd> llt(r);
  Eigen::VectorXd z(pts.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng::normal(eng);
  Eigen::VectorXd correlated = llt.matrixL() * z;
  return std::sqrt(sigma2) * correlated;
}

}  // namespace

TEST_SUITE_BEGIN("kriging");

TEST_CASE("gaussian_correlation: pinned values and decay") {
  Eigen::VectorXd a(1), b(1), theta(1);
  a << 0.4;
  b << 0.4;
  theta << 3.0;
  CHECK(gaussian_correlation(a, b, theta) == 1.0);

  b << 1.4;
  theta << 1.0;
  CHECK(gaussian_correlation(a, b, theta) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

  b << 50.0;
  CHECK(gaussian_correlation(a, b, theta) < 1e-12);

  Eigen::VectorXd bad(2);
  CHECK_THROWS_AS(gaussian_correlation(a, bad, theta), DimensionError);
}

TEST_CASE("blue_estimates: identity correlation reduces to OLS") {
  rng::Engine eng(21);
  int k = 18;
  Eigen::MatrixXd f(k, 3);
  Eigen::VectorXd y(k);
  for (int i = 0; i < k; ++i) {
    f(i, 0) = 1.0;
    f(i, 1) = rng::normal(eng);
    f(i, 2) = rng::normal(eng);
    y(i) = rng::normal(eng);
  }
  SpdFactor identity = SpdFactor::compute(Eigen::MatrixXd::Identity(k, k));
  BlueEstimate est = blue_estimates(f, identity, y);
  Eigen::VectorXd ols = oracles::pinv_ols(f, y);
  CHECK((est.beta - ols).norm() <= 1e-10 * ols.norm());
}

TEST_CASE("blue_estimates: exact trend gives beta* and zero sigma2") {
  rng::Engine eng(22);
  int k = 15;
  Eigen::MatrixXd pts = random_points(k, 1, eng);
  Eigen::MatrixXd f(k, 2);
  f.col(0).setOnes();
  f.col(1) = pts.col(0);
  Eigen::VectorXd beta_star(2);
  beta_star << 2.0, -3.0;
  Eigen::VectorXd y = f * beta_star;

  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 4.0);
  SpdFactor corr = SpdFactor::compute(correlation_matrix(pts, theta));
  BlueEstimate est = blue_estimates(f, corr, y);
  CHECK((est.beta - beta_star).norm() < 1e-10);
  CHECK(est.sigma2 < 1e-10);
}

TEST_CASE("blue_estimates: random SPD instance matches the dense-inverse oracle") {
  rng::Engine eng(23);
  for (int trial = 0; trial < 10; ++trial) {
    int k = 15, s = 4;
    Eigen::MatrixXd a(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) a(i, j) = rng::normal(eng);
    }
    Eigen::MatrixXd spd = a * a.transpose() + 5.0 * Eigen::MatrixXd::Identity(k, k);
    Eigen::MatrixXd f(k, s);
    Eigen::VectorXd y(k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < s; ++j) f(i, j) = rng::normal(eng);
      y(i) = rng::normal(eng);
    }
    SpdFactor corr = SpdFactor::compute(spd);

    // the oracle must see the same regularized matrix the factorization used
    Eigen::MatrixXd reg = spd;
    reg.diagonal().array() += corr.nugget();
    Eigen::VectorXd expected = oracles::wls_dense(f, reg, y);
    BlueEstimate est = blue_estimates(f, corr, y);
    CHECK((est.beta - expected).norm() <= 1e-8 * expected.norm());
  }
}

TEST_CASE("predict: interpolation, kernel-decay limit, and the dense oracle") {
  rng::Engine eng(31);
  int k = 5;
  Eigen::MatrixXd pts(k, 1);
  pts << 0.05, 0.3, 0.5, 0.72, 0.95;
  Eigen::VectorXd y(k);
  y << 1.0, -0.5, 0.25, 2.0, -1.0;
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 8.0);
  KrigingModel model = make_kriging_model(TrendModel::constant(1), pts, y, theta);

  SUBCASE("reproduces the design values with near-zero MSE") {
    for (int i = 0; i < k; ++i) {
      Prediction p = predict_kriging(model, pts.row(i).transpose());
      CHECK(std::abs(p.mean - y(i)) < 1e-8);
      CHECK(p.mse <= 1e-8 * model.params().sigma2);
    }
  }

  SUBCASE("far from the design: trend value and sigma2-scale MSE") {
    Eigen::VectorXd far(1);
    far << 40.0;
    Prediction p = predict_kriging(model, far);
    double trend_value = model.beta()(0);
    CHECK(std::abs(p.mean - trend_value) < 1e-10);
    // MSE -> sigma2 (1 + trend inflation)
    CHECK(p.mse >= model.params().sigma2);
  }

  SUBCASE("matches the verbatim dense-algebra evaluation to 1e-10") {
    Eigen::MatrixXd r = correlation_matrix(pts, theta);
    r.diagonal().array() += model.nugget();
    Eigen::MatrixXd f = Eigen::MatrixXd::Ones(k, 1);
    for (double xq : {0.11, 0.4, 0.63, 0.88}) {
      Eigen::VectorXd x(1);
      x << xq;
      Eigen::VectorXd rv(k);
      for (int i = 0; i < k; ++i) {
        rv(i) = gaussian_correlation(x, pts.row(i).transpose(), theta);
      }
      auto expected = oracles::uk_dense(r, f, y, model.beta(), model.params().sigma2, rv,
                                        Eigen::VectorXd::Ones(1));
      Prediction p = predict_kriging(model, x);
      CHECK(std::abs(p.mean - expected.mean) < 1e-10);
      CHECK(std::abs(p.mse_raw - expected.mse) < 1e-10);
    }
  }
}

TEST_CASE("predict: MSE positive away from the design, zero on it") {
  rng::Engine eng(33);
  Eigen::MatrixXd pts(6, 1);
  for (int i = 0; i < 6; ++i) pts(i, 0) = i / 5.0;
  Eigen::VectorXd y(6);
  for (int i = 0; i < 6; ++i) y(i) = std::sin(4.0 * pts(i, 0));
  KrigingModel model =
      make_kriging_model(TrendModel::constant(1), pts, y, Eigen::VectorXd::Constant(1, 10.0));
  Eigen::VectorXd x(1);
  x << 0.55;
  CHECK(predict_kriging(model, x).mse > 1e-6 * model.params().sigma2);
}

TEST_CASE("translation invariance of the stationary kernel") {
  rng::Engine eng(41);
  int k = 10;
  Eigen::MatrixXd pts = random_points(k, 2, eng);
  Eigen::VectorXd y(k);
  for (int i = 0; i < k; ++i) y(i) = rng::normal(eng);
  Eigen::VectorXd theta(2);
  theta << 3.0, 7.0;

  KrigingModel base = make_kriging_model(TrendModel::constant(2), pts, y, theta);
  Eigen::MatrixXd shifted = pts;
  shifted.col(0).array() += 11.0;
  shifted.col(1).array() -= 4.0;
  KrigingModel moved = make_kriging_model(TrendModel::constant(2), shifted, y, theta);

  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd x = random_points(1, 2, eng).row(0).transpose();
    Eigen::VectorXd xs = x;
    xs(0) += 11.0;
    xs(1) -= 4.0;
    Prediction a = predict_kriging(base, x);
    Prediction b = predict_kriging(moved, xs);
    CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-10));
    CHECK(a.mse == doctest::Approx(b.mse).epsilon(1e-9));
  }
}

TEST_CASE("predictor is linear in the observations at fixed theta") {
  rng::Engine eng(43);
  int k = 9;
  Eigen::MatrixXd pts(k, 1);  // jittered grid keeps R well-conditioned
  for (int i = 0; i < k; ++i) pts(i, 0) = i / 8.0 + 0.02 * rng::uniform(eng, -1.0, 1.0);
  Eigen::VectorXd y1(k), y2(k);
  for (int i = 0; i < k; ++i) {
    y1(i) = rng::normal(eng);
    y2(i) = rng::normal(eng);
  }
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 5.0);
  KrigingModel m1 = make_kriging_model(TrendModel::constant(1), pts, y1, theta);
  KrigingModel m2 = make_kriging_model(TrendModel::constant(1), pts, y2, theta);
  KrigingModel m12 = make_kriging_model(TrendModel::constant(1), pts, y1 + y2, theta);
  for (double xq : {0.2, 0.5, 0.8}) {
    Eigen::VectorXd x(1);
    x << xq;
    double sum = predict_kriging(m1, x).mean + predict_kriging(m2, x).mean;
    CHECK(predict_kriging(m12, x).mean == doctest::Approx(sum).epsilon(1e-10));
  }
}

TEST_CASE("fit_kriging: constant data collapses to the constant predictor") {
  Eigen::MatrixXd pts(8, 1);
  for (int i = 0; i < 8; ++i) pts(i, 0) = i / 7.0;
  Eigen::VectorXd y = Eigen::VectorXd::Constant(8, 4.2);
  GaConfig cfg = quick_ga(10);
  cfg.generations = 20;
  KrigingModel model = fit_kriging(TrendModel::constant(1), pts, y, cfg);
  CHECK(model.params().sigma2 < 1e-12);
  for (double xq : {0.13, 0.77}) {
    Eigen::VectorXd x(1);
    x << xq;
    CHECK(predict_kriging(model, x).mean == doctest::Approx(4.2).epsilon(1e-10));
  }
}

TEST_CASE("fit_kriging: theta recovery on synthetic GP draws (median over seeds)") {
  const double theta_star = 5.0;
  std::vector<double> estimates;
  for (std::uint64_t seed = 1; seed <= 9; ++seed) {
    rng::Engine eng(seed * 1000 + 7);
    Eigen::MatrixXd pts = random_points(40, 1, eng);
    Eigen::VectorXd y = gp_draw(pts, theta_star, 2.0, eng);
    GaConfig cfg = quick_ga(seed);
    cfg.generations = 60;
    KrigingModel model = fit_kriging(TrendModel::constant(1), pts, y, cfg);
    estimates.push_back(model.params().theta(0));
  }
  std::sort(estimates.begin(), estimates.end());
  double median = estimates[estimates.size() / 2];
  CHECK(median > theta_star / 2.0);
  CHECK(median < theta_star * 2.0);
}

TEST_CASE("fit_kriging: returned theta beats 32 random probes") {
  rng::Engine eng(55);
  Eigen::MatrixXd pts = random_points(20, 2, eng);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    y(i) = std::sin(3.0 * pts(i, 0)) * std::cos(2.0 * pts(i, 1)) + 0.05 * rng::normal(eng);
  }
  TrendModel trend = TrendModel::constant(2);
  KrigingModel model = fit_kriging(trend, pts, y, quick_ga(56));
  double at_fit = model.log_objective();

  auto bounds = default_theta_bounds(pts);
  for (int probe = 0; probe < 32; ++probe) {
    Eigen::VectorXd theta(2);
    for (int d = 0; d < 2; ++d) {
      theta(d) = std::pow(10.0, rng::uniform(eng, bounds[d].first, bounds[d].second));
    }
    double obj = kriging_log_objective(trend, pts, y, theta);
    if (std::isfinite(obj)) CHECK(at_fit <= obj + 1e-9);
  }
}

TEST_SUITE_END();
