#include <doctest.h>

#include <cmath>

#include "stokrig/simulators.hpp"

using namespace stokrig;

TEST_SUITE_BEGIN("simulators");

TEST_CASE("mm1_true: values and limits") {
  CHECK(mm1_true(0.5, 1000.0).first == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mm1_true(0.9, 6000.0).second == doctest::Approx(5.7).epsilon(1e-12));
  auto [m, v] = mm1_true(1e-9, 6000.0);
  CHECK(m == doctest::Approx(1.0));
  CHECK(v < 1e-9);
  CHECK_THROWS_AS(mm1_true(1.0, 100.0), InvalidArgumentError);
  CHECK_THROWS_AS(mm1_true(0.5, 0.0), InvalidArgumentError);
}

TEST_CASE("mm1_simulate: long-run mean consistency at x = 0.3" * doctest::timeout(120)) {
  const double x = 0.3, t = 1e5;
  const int seeds = 50;
  double sum = 0.0, sq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    rng::Engine eng = rng::derive_stream(1001, static_cast<std::uint64_t>(s));
    double out = mm1_simulate(x, t, eng);
    sum += out;
    sq += out * out;
  }
  double mean = sum / seeds;
  double sd = std::sqrt((sq - seeds * mean * mean) / (seeds - 1));
  double se = sd / std::sqrt(static_cast<double>(seeds));
  CHECK(std::abs(mean - 1.0 / 0.7) <= 3.0 * se);
}

TEST_CASE("mm1_simulate: variance scale matches the analytic formula" * doctest::timeout(300)) {
  const double x = 0.9, t = 6000.0;
  const int seeds = 200;
  double sum = 0.0, sq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    rng::Engine eng = rng::derive_stream(2002, static_cast<std::uint64_t>(s));
    double out = mm1_simulate(x, t, eng);
    sum += out;
    sq += out * out;
  }
  double mean = sum / seeds;
  double var = (sq - seeds * mean * mean) / (seeds - 1);
  double expected = mm1_true(x, t).second;  // 5.7
  CHECK(var > expected / 2.0);
  CHECK(var < expected * 2.0);
}

TEST_CASE("mm1_simulate: very long horizon converges" * doctest::timeout(300)) {
  rng::Engine eng(3003);
  double out = mm1_simulate(0.5, 1e7, eng);
  CHECK(std::abs(out - 2.0) < 0.04);  // within 2%
}

TEST_CASE("synthetic_known_noise: moments") {
  const double x = 0.6, t = 6000.0;
  auto [mean_true, var_true] = mm1_true(x, t);
  rng::Engine eng(4004);
  const int n = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double out = synthetic_known_noise(x, t, eng);
    sum += out;
    sq += out * out;
  }
  double mean = sum / n;
  double var = (sq - n * mean * mean) / (n - 1);
  double se_mean = std::sqrt(var_true / n);
  CHECK(std::abs(mean - mean_true) <= 3.0 * se_mean);
  CHECK(var == doctest::Approx(var_true).epsilon(0.05));
}

TEST_CASE("eggbox: deterministic part and noise variance") {
  rng::Engine eng(5005);
  CHECK(eggbox_mean(0.0, 0.0) == 0.0);
  CHECK(eggbox_mean(1.0, 1.0) == doctest::Approx(2.0 * std::sin(9.0)).epsilon(1e-14));
  CHECK(2.0 * std::sin(9.0) == doctest::Approx(0.8242).epsilon(1e-4));

  // noise variance at the origin: 2 + cos(pi) = 1
  const int n = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double out = eggbox(0.0, 0.0, eng);
    sum += out;
    sq += out * out;
  }
  double mean = sum / n;
  double var = (sq - n * mean * mean) / (n - 1);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));

  // bound 2 + cos in [1, 3] over the domain
  for (double a : {-1.0, -0.3, 0.4, 1.0}) {
    for (double b : {-1.0, 0.0, 0.7, 1.0}) {
      double w = eggbox_noise_width(a, b);
      CHECK(w >= 1.0);
      CHECK(w <= 3.0);
    }
  }
  CHECK_THROWS_AS(eggbox(1.5, 0.0, eng), InvalidArgumentError);
}

TEST_CASE("ishigami: pinned deterministic values and vanishing noise") {
  rng::Engine eng(6006);
  constexpr double half_pi = 1.57079632679489662;
  CHECK(ishigami_mean(half_pi, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ishigami_mean(0.0, half_pi, 0.0) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(ishigami_mean(0.0, 0.0, 2.5) == doctest::Approx(0.0));
  CHECK(ishigami_noise_width(0.0, 0.0, 2.5) == doctest::Approx(0.0));
  CHECK(ishigami(0.0, 0.0, 2.5, eng) == doctest::Approx(0.0));
  CHECK_THROWS_AS(ishigami(4.0, 0.0, 0.0, eng), InvalidArgumentError);
}

TEST_CASE("lhs_design: Latin property in every dimension") {
  Eigen::VectorXd lo(3), hi(3);
  lo << 0.0, -2.0, 10.0;
  hi << 1.0, 2.0, 20.0;
  for (std::uint64_t seed : {11ull, 12ull}) {
    Eigen::MatrixXd pts = lhs_design(3, 17, lo, hi, seed);
    REQUIRE(pts.rows() == 17);
    for (int d = 0; d < 3; ++d) {
      std::vector<int> bin_count(17, 0);
      for (int i = 0; i < 17; ++i) {
        double u = (pts(i, d) - lo(d)) / (hi(d) - lo(d));
        CHECK(u >= 0.0);
        CHECK(u < 1.0 + 1e-12);
        int b = std::min(16, static_cast<int>(u * 17.0));
        bin_count[static_cast<std::size_t>(b)] += 1;
      }
      for (int b = 0; b < 17; ++b) CHECK(bin_count[static_cast<std::size_t>(b)] == 1);
    }
  }
  // different seeds give different designs
  Eigen::MatrixXd a = lhs_design(3, 17, lo, hi, 11);
  Eigen::MatrixXd b = lhs_design(3, 17, lo, hi, 12);
  CHECK((a - b).cwiseAbs().maxCoeff() > 1e-12);
  // same seed reproduces exactly
  Eigen::MatrixXd c = lhs_design(3, 17, lo, hi, 11);
  CHECK(a == c);

  // 1-D quartiles
  Eigen::VectorXd l1(1), h1(1);
  l1 << 0.0;
  h1 << 1.0;
  Eigen::MatrixXd q = lhs_design(1, 4, l1, h1, 99);
  std::vector<double> xs(4);
  for (int i = 0; i < 4; ++i) xs[static_cast<std::size_t>(i)] = q(i, 0);
  std::sort(xs.begin(), xs.end());
  for (int i = 0; i < 4; ++i) {
    CHECK(xs[static_cast<std::size_t>(i)] >= 0.25 * i);
    CHECK(xs[static_cast<std::size_t>(i)] <= 0.25 * (i + 1));
  }
}

TEST_CASE("allocate_replications: proportional splits, rounding, and floors") {
  Eigen::VectorXd v2(2);
  v2 << 1.0, 4.0;
  CHECK(allocate_replications(v2, 9) == std::vector<int>{3, 6});

  Eigen::VectorXd flat = Eigen::VectorXd::Constant(6, 2.5);
  CHECK(allocate_replications(flat, 30) == std::vector<int>{5, 5, 5, 5, 5, 5});

  Eigen::VectorXd v3(3);
  v3 << 1.0, 1.0, 4.0;
  CHECK(allocate_replications(v3, 10) == std::vector<int>{3, 2, 5});

  // budget conservation and floors on a skewed case
  Eigen::VectorXd skew(4);
  skew << 0.0, 0.0, 0.0, 100.0;
  auto n = allocate_replications(skew, 10, 2);
  long total = 0;
  for (int x : n) {
    CHECK(x >= 2);
    total += x;
  }
  CHECK(total == 10);

  CHECK_THROWS_AS(allocate_replications(v3, 2), InvalidArgumentError);
  Eigen::VectorXd neg(2);
  neg << -1.0, 1.0;
  CHECK_THROWS_AS(allocate_replications(neg, 10), InvalidArgumentError);
}

TEST_CASE("simulators are deterministic per seed") {
  for (int trial = 0; trial < 3; ++trial) {
    rng::Engine a(42), b(42);
    CHECK(mm1_simulate(0.7, 2000.0, a) == mm1_simulate(0.7, 2000.0, b));
    CHECK(eggbox(0.3, -0.2, a) == eggbox(0.3, -0.2, b));
    CHECK(ishigami(1.0, -2.0, 0.5, a) == ishigami(1.0, -2.0, 0.5, b));
  }
}

TEST_SUITE_END();
