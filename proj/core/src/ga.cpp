#include "stokrig/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stokrig/rng.hpp"

namespace stokrig {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double feasible_value(double v) { return std::isfinite(v) ? v : kNegInf; }

// Golden-section maximization on [lo, hi]; assumes local unimodality around
// the incumbent, which holds after the GA has localized the basin.
double golden_section(const std::function<double(double)>& f, double lo, double hi,
                      int iterations, double& best_x, double best_f) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  double xm = 0.5 * (a + b);
  double fm = f(xm);
  struct Cand { double x, f; } cands[] = {{x1, f1}, {x2, f2}, {xm, fm}};
  for (const auto& c : cands) {
    if (c.f > best_f) {
      best_f = c.f;
      best_x = c.x;
    }
  }
  return best_f;
}

}  // namespace

void GaConfig::validate() const {
  if (population < 4) throw InvalidArgumentError("GaConfig: population must be >= 4");
  if (generations < 1) throw InvalidArgumentError("GaConfig: generations must be >= 1");
  if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 || mutation_rate > 1.0) {
    throw InvalidArgumentError("GaConfig: rates must lie in [0, 1]");
  }
  if (elitism < 0 || elitism >= population) throw InvalidArgumentError("GaConfig: bad elitism");
  if (tournament < 1) throw InvalidArgumentError("GaConfig: tournament size must be >= 1");
  if (bounds.empty()) throw InvalidArgumentError("GaConfig: bounds must be set");
  for (const auto& [lo, hi] : bounds) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw InvalidArgumentError("GaConfig: bounds must be finite with lo < hi");
    }
  }
}

GaResult ga_maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                     const GaConfig& config) {
  config.validate();
  const int n_genes = static_cast<int>(config.bounds.size());
  const int pop_n = config.population;
  rng::Engine eng(config.seed);

  Eigen::VectorXd width(n_genes), lo(n_genes), hi(n_genes);
  for (int g = 0; g < n_genes; ++g) {
    lo(g) = config.bounds[g].first;
    hi(g) = config.bounds[g].second;
    width(g) = hi(g) - lo(g);
  }
  auto clamp = [&](Eigen::VectorXd& v) {
    for (int g = 0; g < n_genes; ++g) v(g) = std::clamp(v(g), lo(g), hi(g));
  };
  auto random_individual = [&]() {
    Eigen::VectorXd v(n_genes);
    for (int g = 0; g < n_genes; ++g) v(g) = rng::uniform(eng, lo(g), hi(g));
    return v;
  };

  std::vector<Eigen::VectorXd> pop(pop_n);
  std::vector<double> fit(pop_n, kNegInf);

  bool any_feasible = false;
  for (int attempt = 0; attempt < 10 && !any_feasible; ++attempt) {
    for (int i = 0; i < pop_n; ++i) {
      pop[i] = random_individual();
      fit[i] = feasible_value(objective(pop[i]));
      any_feasible = any_feasible || fit[i] > kNegInf;
    }
  }
  if (!any_feasible) {
    throw OptimizerError("ga_maximize: initial population infeasible after 10 re-draws");
  }

  GaResult result;
  result.value = kNegInf;
  auto record_best = [&](const Eigen::VectorXd& genes, double value) {
    if (value > result.value) {
      result.value = value;
      result.genes = genes;
    }
  };
  for (int i = 0; i < pop_n; ++i) record_best(pop[i], fit[i]);

  auto tournament_pick = [&]() -> int {
    int best = static_cast<int>(eng() % static_cast<std::uint64_t>(pop_n));
    for (int t = 1; t < config.tournament; ++t) {
      int c = static_cast<int>(eng() % static_cast<std::uint64_t>(pop_n));
      if (fit[c] > fit[best]) best = c;
    }
    return best;
  };

  int stall = 0;
  double last_best = result.value;
  for (int gen = 0; gen < config.generations; ++gen) {
    // Elites carry over unchanged, so the best-so-far history is monotone.
    std::vector<int> order(pop_n);
    for (int i = 0; i < pop_n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fit[a] > fit[b]; });

    std::vector<Eigen::VectorXd> next(pop_n);
    std::vector<double> next_fit(pop_n, kNegInf);
    int filled = 0;
    for (; filled < config.elitism && filled < pop_n; ++filled) {
      next[filled] = pop[order[filled]];
      next_fit[filled] = fit[order[filled]];
    }

    while (filled < pop_n) {
      const Eigen::VectorXd& p1 = pop[tournament_pick()];
      const Eigen::VectorXd& p2 = pop[tournament_pick()];
      Eigen::VectorXd child = p1;
      if (rng::uniform01(eng) < config.crossover_rate) {
        for (int g = 0; g < n_genes; ++g) {
          double w = rng::uniform(eng, -0.25, 1.25);  // blend with mild extrapolation
          child(g) = w * p1(g) + (1.0 - w) * p2(g);
        }
      }
      for (int g = 0; g < n_genes; ++g) {
        if (rng::uniform01(eng) < config.mutation_rate) {
          child(g) += rng::normal(eng, 0.0, 0.1 * width(g));
        }
      }
      clamp(child);
      next[filled] = std::move(child);
      next_fit[filled] = feasible_value(objective(next[filled]));
      record_best(next[filled], next_fit[filled]);
      ++filled;
    }

    pop = std::move(next);
    fit = std::move(next_fit);
    result.history.push_back(result.value);

    if (result.value > last_best + 1e-14 * std::max(1.0, std::abs(last_best))) {
      stall = 0;
      last_best = result.value;
    } else if (++stall >= config.stall_generations) {
      break;
    }
  }

  if (config.polish && result.value > kNegInf) {
    Eigen::VectorXd best = result.genes;
    double best_f = result.value;
    for (int sweep = 0; sweep < config.polish_sweeps; ++sweep) {
      for (int g = 0; g < n_genes; ++g) {
        double a = std::max(lo(g), best(g) - 0.25 * width(g));
        double b = std::min(hi(g), best(g) + 0.25 * width(g));
        double best_x = best(g);
        auto line = [&](double x) {
          Eigen::VectorXd v = best;
          v(g) = x;
          return feasible_value(objective(v));
        };
        best_f = golden_section(line, a, b, config.polish_iterations, best_x, best_f);
        best(g) = best_x;
      }
    }
    record_best(best, best_f);
    if (!result.history.empty()) result.history.back() = result.value;
  }

  return result;
}

}  // namespace stokrig
