#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stokrig/errors.hpp"
#include "stokrig/rng.hpp"

namespace stokrig {

/// How the noise-width parameter in N(0, v) is read for the egg-box and
/// Ishigami testbeds: as the variance (default) or as the standard deviation.
enum class NoiseReading { Variance, StdDev };

/// Steady-state mean sojourn time and the variance of a run-length-T
/// estimate for the M/M/1 queue with unit service rate:
///   y(x) = 1/(1-x),  V(x) = 2x(1+x) / (T (1-x)^4).
/// Throws InvalidArgumentError for x outside (0, 1) or T <= 0.
std::pair<double, double> mm1_true(double arrival_rate, double run_length);

/// Discrete-event M/M/1 simulation (Lindley recursion, exponential
/// interarrivals at the given rate, unit-rate service): time-averaged sojourn
/// time of customers arriving in (0.1 T, T].
double mm1_simulate(double arrival_rate, double run_length, rng::Engine& eng);

/// Known-variance single-replication protocol: y(x) + N(0, V(x; T)).
double synthetic_known_noise(double arrival_rate, double run_length, rng::Engine& eng);

/// Egg-box surface on [-1, 1]^2: sin(9 x1^2) + sin(9 x2^2) with additive
/// Gaussian noise of width 2 + cos(pi + (x1 + x2)/2).
double eggbox_mean(double x1, double x2);
double eggbox_noise_width(double x1, double x2);
double eggbox(double x1, double x2, rng::Engine& eng,
              NoiseReading reading = NoiseReading::Variance);

/// Stochastic Ishigami function on [-pi, pi]^3:
/// sin x1 + 7 sin^2 x2 + 0.1 x3^4 sin x1 with Gaussian noise of width
/// sqrt(|f(x)|).
double ishigami_mean(double x1, double x2, double x3);
double ishigami_noise_width(double x1, double x2, double x3);
double ishigami(double x1, double x2, double x3, rng::Engine& eng,
                NoiseReading reading = NoiseReading::Variance);

/// Latin hypercube design: k points, one per axis stratum in every dimension,
/// jittered within strata and mapped onto [lo, hi]^M. Deterministic per seed.
Eigen::MatrixXd lhs_design(int dimension, int k, const Eigen::VectorXd& lo,
                           const Eigen::VectorXd& hi, std::uint64_t seed);

/// Splits a replication budget across design points proportionally to the
/// noise standard deviation: n_i = round(C sqrt(V_i) / sum_j sqrt(V_j)) by
/// largest remainder, floored at `min_replications` per point (ties to the
/// lower index), conserving the budget exactly. Throws InvalidArgumentError
/// when C < k * min_replications or any V_i < 0.
std::vector<int> allocate_replications(const Eigen::VectorXd& variances, long budget,
                                       int min_replications = 1);

}  // namespace stokrig
