#include <benchmark/benchmark.h>

#include "stokrig/lar.hpp"
#include "stokrig/rng.hpp"
#include "stokrig/simulators.hpp"
#include "stokrig/sk.hpp"

using namespace stokrig;

namespace {

Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::uint64_t seed) {
  rng::Engine eng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng::normal(eng);
  }
  return m;
}

void BM_EnumerateBasis(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_basis(3, static_cast<int>(state.range(0)), 0.8));
  }
}
BENCHMARK(BM_EnumerateBasis)->Arg(6)->Arg(9)->Arg(12);

void BM_LarPath(benchmark::State& state) {
  const int k = 1000, p = static_cast<int>(state.range(0));
  Eigen::MatrixXd x = gaussian_matrix(k, p, 1);
  Eigen::VectorXd y = gaussian_matrix(k, 1, 2).col(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lar_path(x, y));
  }
}
BENCHMARK(BM_LarPath)->Arg(50)->Arg(200);

void BM_SkLikelihoodFit(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  rng::Engine eng(3);
  Eigen::MatrixXd pts(k, 2);
  Eigen::VectorXd means(k), v(k);
  for (int i = 0; i < k; ++i) {
    pts(i, 0) = rng::uniform01(eng);
    pts(i, 1) = rng::uniform01(eng);
    means(i) = std::sin(6.0 * pts(i, 0)) + std::cos(4.0 * pts(i, 1)) + 0.2 * rng::normal(eng);
    v(i) = 0.05 + 0.1 * rng::uniform01(eng);
  }
  ExperimentalDesign ed = ExperimentalDesign::with_known_variances(pts, means, v);
  Eigen::MatrixXd f = Eigen::MatrixXd::Ones(k, 1);
  CorrelationParams params;
  params.theta = Eigen::VectorXd::Constant(2, 5.0);
  params.sigma2 = 1.0;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd sigma_eps = intrinsic_covariance(ed);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sk_log_likelihood(f, beta, params, sigma_eps, means, pts));
  }
}
BENCHMARK(BM_SkLikelihoodFit)->Arg(64)->Arg(256);

void BM_PredictSk(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  rng::Engine eng(4);
  Eigen::MatrixXd pts(k, 2);
  Eigen::VectorXd means(k), v(k);
  for (int i = 0; i < k; ++i) {
    pts(i, 0) = rng::uniform01(eng);
    pts(i, 1) = rng::uniform01(eng);
    means(i) = std::sin(6.0 * pts(i, 0)) + 0.2 * rng::normal(eng);
    v(i) = 0.1;
  }
  CorrelationParams params;
  params.theta = Eigen::VectorXd::Constant(2, 5.0);
  params.sigma2 = 1.0;
  SkModel model(TrendModel::constant(2), ExperimentalDesign::with_known_variances(pts, means, v),
                params);
  Eigen::VectorXd x(2);
  x << 0.37, 0.61;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.predict(x));
  }
}
BENCHMARK(BM_PredictSk)->Arg(64)->Arg(256);

void BM_Mm1Simulate(benchmark::State& state) {
  rng::Engine eng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mm1_simulate(0.9, static_cast<double>(state.range(0)), eng));
  }
}
BENCHMARK(BM_Mm1Simulate)->Arg(6000);

}  // namespace

BENCHMARK_MAIN();
