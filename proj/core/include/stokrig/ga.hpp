#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stokrig/errors.hpp"

namespace stokrig {

/// Real-coded genetic algorithm settings. Genes are searched inside a fixed
/// box (for likelihood fits: log10 of the hyperparameters).
struct GaConfig {
  int population = 40;
  int generations = 100;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;   // per gene; sigma = 10% of the box width
  int elitism = 2;
  int tournament = 3;
  int stall_generations = 20;   // early stop after this many flat generations
  std::vector<std::pair<double, double>> bounds;  // per-gene [lo, hi]
  std::uint64_t seed = 0;
  bool polish = true;           // coordinate golden-section refinement of the best
  int polish_iterations = 50;   // golden-section iterations per coordinate
  int polish_sweeps = 2;

  void validate() const;
};

struct GaResult {
  Eigen::VectorXd genes;
  double value = 0.0;
  std::vector<double> history;  // best-so-far per generation (non-decreasing)
};

/// Maximizes `objective` over the configured box. Evaluations returning NaN
/// or -inf are treated as infeasible (-inf fitness). Deterministic for a
/// fixed seed. Throws OptimizerError if the initial population is entirely
/// infeasible after 10 re-draws, or if no feasible point was ever found.
GaResult ga_maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                     const GaConfig& config);

}  // namespace stokrig
