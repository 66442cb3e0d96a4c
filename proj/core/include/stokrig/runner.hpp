#pragma once

#include <string>
#include <vector>

#include "stokrig/metrics.hpp"
#include "stokrig/scenario.hpp"
#include "stokrig/sk.hpp"

namespace stokrig {

/// One fitted surrogate on one macro-replication.
struct RunResult {
  std::string scenario;
  SurrogateKind surrogate = SurrogateKind::OrdinarySk;
  int rep = 0;
  std::uint64_t seed = 0;   // derived per-rep stream seed
  double ermse = 0.0;
  double nmae = 0.0;
  int selected_terms = 0;   // trend basis cardinality
  double wall_seconds = 0.0;
  bool ok = true;
  std::string error;
};

struct ScenarioRun {
  ScenarioSpec spec;
  ValidationSet vs;
  std::vector<RunResult> results;
  /// Fraction of macro-reps with at least one failed surrogate fit.
  double failed_rep_fraction = 0.0;
};

/// Runs all macro-replications of a scenario: per rep, draw the design,
/// allocate replications, simulate, fit every requested surrogate on the
/// identical data, and score it on the shared validation set. Deterministic
/// per (spec, seed) regardless of the job count. Individual surrogate
/// failures are recorded (the run continues).
ScenarioRun run_scenario(const ScenarioSpec& spec);

/// The experimental design macro-rep `rep` of the scenario would train on
/// (same streams as run_scenario uses).
ExperimentalDesign build_rep_design(const ScenarioSpec& spec, int rep);

struct SummaryRow {
  std::string scenario;
  SurrogateKind surrogate = SurrogateKind::OrdinarySk;
  int reps_ok = 0;
  double mean_ermse = 0.0;
  double median_ermse = 0.0;
  double mean_nmae = 0.0;
  double median_nmae = 0.0;
  double mean_terms = 0.0;
  double median_terms = 0.0;
  /// Percent reduction of this surrogate's mean/median ERMSE and NMAE
  /// relative to Ordinary SK on the same scenario (NaN for SK itself or
  /// when SK is absent).
  double mean_ermse_improvement_pct = 0.0;
  double median_ermse_improvement_pct = 0.0;
  double mean_nmae_improvement_pct = 0.0;
};

/// Aggregates result rows per (scenario, surrogate), with improvement
/// percentages of each surrogate against Ordinary SK.
std::vector<SummaryRow> summarize(const std::vector<RunResult>& results);

/// Fixed-column CSV codecs; numeric fields use %.12g so identical inputs
/// produce identical bytes. Wall times are excluded (see timings_to_csv).
std::string results_to_csv(const std::vector<RunResult>& results);
std::vector<RunResult> results_from_csv(const std::string& text);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);
/// Wall-clock seconds per row; outside the byte-determinism contract.
std::string timings_to_csv(const std::vector<RunResult>& results);

/// Raw design dump: one row per design point with its coordinates, its
/// replication count, and the replication outputs (or the single sample mean
/// in the known-noise protocol).
std::string ed_to_csv(const ExperimentalDesign& ed);

/// Writes results.csv, summary.csv, timings.csv, and meta.json into `dir`
/// (created if missing). Returns the number of files written.
int write_run_outputs(const std::string& dir, const ScenarioRun& run);

}  // namespace stokrig
