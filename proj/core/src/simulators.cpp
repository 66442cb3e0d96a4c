#include "stokrig/simulators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stokrig {

std::pair<double, double> mm1_true(double arrival_rate, double run_length) {
  if (!(arrival_rate > 0.0) || !(arrival_rate < 1.0)) {
    throw InvalidArgumentError("mm1_true: arrival rate must lie in (0, 1)");
  }
  if (!(run_length > 0.0)) throw InvalidArgumentError("mm1_true: run length must be positive");
  double one_minus = 1.0 - arrival_rate;
  double mean = 1.0 / one_minus;
  double var = 2.0 * arrival_rate * (1.0 + arrival_rate) /
               (run_length * one_minus * one_minus * one_minus * one_minus);
  return {mean, var};
}

double mm1_simulate(double arrival_rate, double run_length, rng::Engine& eng) {
  if (!(arrival_rate > 0.0) || !(arrival_rate < 1.0)) {
    throw InvalidArgumentError("mm1_simulate: arrival rate must lie in (0, 1)");
  }
  const double warmup = 0.1 * run_length;

  double arrival = 0.0;
  double wait_q = 0.0;  // queueing delay of the previous customer
  double prev_service = 0.0;
  bool first = true;
  double sum = 0.0;
  long count = 0;

  while (true) {
    double inter = rng::exponential(eng, arrival_rate);
    arrival += inter;
    if (arrival > run_length) break;
    if (!first) {
      wait_q = std::max(0.0, wait_q + prev_service - inter);
    }
    double service = rng::exponential(eng, 1.0);
    double sojourn = wait_q + service;
    if (arrival > warmup) {
      sum += sojourn;
      ++count;
    }
    prev_service = service;
    first = false;
  }
  if (count == 0) return 1.0 / (1.0 - arrival_rate);  // horizon too short to observe anyone
  return sum / static_cast<double>(count);
}

double synthetic_known_noise(double arrival_rate, double run_length, rng::Engine& eng) {
  auto [mean, var] = mm1_true(arrival_rate, run_length);
  return mean + rng::normal(eng) * std::sqrt(var);
}

double eggbox_mean(double x1, double x2) {
  return std::sin(9.0 * x1 * x1) + std::sin(9.0 * x2 * x2);
}

double eggbox_noise_width(double x1, double x2) {
  return 2.0 + std::cos(3.14159265358979323846 + 0.5 * (x1 + x2));
}

double eggbox(double x1, double x2, rng::Engine& eng, NoiseReading reading) {
  if (std::abs(x1) > 1.0 + 1e-12 || std::abs(x2) > 1.0 + 1e-12) {
    throw InvalidArgumentError("eggbox: inputs must lie in [-1, 1]^2");
  }
  double w = eggbox_noise_width(x1, x2);
  double sd = reading == NoiseReading::Variance ? std::sqrt(w) : w;
  return eggbox_mean(x1, x2) + sd * rng::normal(eng);
}

double ishigami_mean(double x1, double x2, double x3) {
  double s2 = std::sin(x2);
  return std::sin(x1) + 7.0 * s2 * s2 + 0.1 * x3 * x3 * x3 * x3 * std::sin(x1);
}

double ishigami_noise_width(double x1, double x2, double x3) {
  return std::sqrt(std::abs(ishigami_mean(x1, x2, x3)));
}

double ishigami(double x1, double x2, double x3, rng::Engine& eng, NoiseReading reading) {
  constexpr double pi = 3.14159265358979323846;
  if (std::abs(x1) > pi + 1e-12 || std::abs(x2) > pi + 1e-12 || std::abs(x3) > pi + 1e-12) {
    throw InvalidArgumentError("ishigami: inputs must lie in [-pi, pi]^3");
  }
  double w = ishigami_noise_width(x1, x2, x3);
  double sd = reading == NoiseReading::Variance ? std::sqrt(w) : w;
  return ishigami_mean(x1, x2, x3) + sd * rng::normal(eng);
}

Eigen::MatrixXd lhs_design(int dimension, int k, const Eigen::VectorXd& lo,
                           const Eigen::VectorXd& hi, std::uint64_t seed) {
  if (dimension < 1 || k < 1) throw InvalidArgumentError("lhs_design: need M >= 1, k >= 1");
  if (lo.size() != dimension || hi.size() != dimension) {
    throw DimensionError("lhs_design: domain size mismatch");
  }
  rng::Engine eng(seed);
  Eigen::MatrixXd points(k, dimension);
  std::vector<int> perm(static_cast<std::size_t>(k));
  for (int d = 0; d < dimension; ++d) {
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates with the library's own uniform to stay seed-stable.
    for (int i = k - 1; i > 0; --i) {
      int j = static_cast<int>(rng::uniform01(eng) * (i + 1));
      j = std::min(j, i);
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < k; ++i) {
      double u = (perm[static_cast<std::size_t>(i)] + rng::uniform01(eng)) / k;
      points(i, d) = lo(d) + (hi(d) - lo(d)) * u;
    }
  }
  return points;
}

std::vector<int> allocate_replications(const Eigen::VectorXd& variances, long budget,
                                       int min_replications) {
  const int k = static_cast<int>(variances.size());
  if (k < 1) throw InvalidArgumentError("allocate_replications: empty variance vector");
  if ((variances.array() < 0.0).any()) {
    throw InvalidArgumentError("allocate_replications: negative variance");
  }
  if (min_replications < 1) min_replications = 1;
  if (budget < static_cast<long>(k) * min_replications) {
    throw InvalidArgumentError("allocate_replications: budget below the per-point floor");
  }

  Eigen::VectorXd sd = variances.array().sqrt();
  double total = sd.sum();
  Eigen::VectorXd target;
  if (total > 0.0) {
    target = sd * (static_cast<double>(budget) / total);
  } else {
    target = Eigen::VectorXd::Constant(k, static_cast<double>(budget) / k);
  }

  // Largest-remainder rounding of the proportional targets.
  std::vector<int> n(static_cast<std::size_t>(k));
  std::vector<std::pair<double, int>> remainder(static_cast<std::size_t>(k));
  long assigned = 0;
  for (int i = 0; i < k; ++i) {
    double f = std::floor(target(i));
    n[static_cast<std::size_t>(i)] = static_cast<int>(f);
    assigned += static_cast<long>(f);
    remainder[static_cast<std::size_t>(i)] = {target(i) - f, i};
  }
  // Ties break to the lower index.
  std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  long leftover = budget - assigned;
  for (long t = 0; t < leftover; ++t) {
    n[static_cast<std::size_t>(remainder[static_cast<std::size_t>(t % k)].second)] += 1;
  }

  // Repair to the floor, taking from the currently largest allocation.
  for (int i = 0; i < k; ++i) {
    while (n[static_cast<std::size_t>(i)] < min_replications) {
      int donor = -1;
      for (int j = 0; j < k; ++j) {
        if (n[static_cast<std::size_t>(j)] > min_replications &&
            (donor < 0 || n[static_cast<std::size_t>(j)] > n[static_cast<std::size_t>(donor)])) {
          donor = j;
        }
      }
      if (donor < 0) throw InvalidArgumentError("allocate_replications: cannot satisfy floor");
      n[static_cast<std::size_t>(donor)] -= 1;
      n[static_cast<std::size_t>(i)] += 1;
    }
  }
  return n;
}

}  // namespace stokrig
