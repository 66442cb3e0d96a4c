// skbench: runs the stochastic-simulation benchmark scenarios, fits the
// surrogates, and writes comparison tables as CSV.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stokrig/runner.hpp"

namespace {

namespace fs = std::filesystem;
using namespace stokrig;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

int cmd_run(const std::string& config_path, long seed, int reps, int jobs,
            const std::string& out_dir, bool dump_ed) {
  ScenarioSpec spec = scenario_from_json(read_file(config_path));
  if (seed >= 0) spec.seed = static_cast<std::uint64_t>(seed);
  if (reps > 0) spec.macro_replications = reps;
  if (jobs > 0) spec.jobs = jobs;
  spec.validate();

  std::cout << "running scenario " << spec.id << ": " << spec.macro_replications
            << " macro-reps, " << spec.surrogates.size() << " surrogates, seed " << spec.seed
            << "\n";
  ScenarioRun run = run_scenario(spec);
  write_run_outputs(out_dir, run);
  std::cout << "wrote results.csv, summary.csv, timings.csv, meta.json to " << out_dir << "\n";

  if (dump_ed) {
    std::ofstream ed_file(fs::path(out_dir) / "ed_rep0.csv", std::ios::binary);
    ed_file << ed_to_csv(build_rep_design(spec, 0));
    std::cout << "wrote ed_rep0.csv\n";
  }

  for (const auto& row : summarize(run.results)) {
    std::cout << "  " << row.scenario << " " << to_string(row.surrogate)
              << ": mean ERMSE " << row.mean_ermse << ", mean NMAE " << row.mean_nmae;
    if (row.surrogate != SurrogateKind::OrdinarySk &&
        !std::isnan(row.mean_ermse_improvement_pct)) {
      std::cout << " (" << row.mean_ermse_improvement_pct << "% vs SK)";
    }
    std::cout << "\n";
  }
  if (run.failed_rep_fraction > 0.10) {
    std::cerr << "warning: " << run.failed_rep_fraction * 100.0 << "% of macro-reps failed\n";
    return 1;
  }
  return 0;
}

int cmd_summarize(const std::string& in_dir) {
  std::string path = (fs::path(in_dir) / "results.csv").string();
  auto results = results_from_csv(read_file(path));
  std::string csv = summary_to_csv(summarize(results));
  std::ofstream out(fs::path(in_dir) / "summary.csv", std::ios::binary);
  out << csv;
  std::cout << csv;
  return 0;
}

int cmd_list() {
  for (const auto& s : builtin_scenarios()) {
    std::cout << s.id << ": " << to_string(s.kind) << ", k=" << s.k;
    if (s.kind == CaseKind::MM1Known || s.kind == CaseKind::MM1Budget) {
      std::cout << ", T=" << s.run_length;
    }
    if (s.is_budget_case()) std::cout << ", C=" << s.budget;
    if (s.full_degree > 0) std::cout << ", full degree " << s.full_degree;
    std::cout << ", LAR degree " << s.lar_degree << ", q=" << s.q_norm << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic Kriging benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", in_dir;
  long seed = -1;
  int reps = 0, jobs = 0;
  bool dump_ed = false;

  auto* run = app.add_subcommand("run", "run a configured scenario");
  run->add_option("--config", config_path, "JSON scenario config")->required();
  run->add_option("--seed", seed, "master seed override");
  run->add_option("--reps", reps, "macro-replication override");
  run->add_option("--jobs", jobs, "concurrent macro-reps");
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_flag("--dump-ed", dump_ed, "also dump the first experimental design as CSV");

  auto* summ = app.add_subcommand("summarize", "aggregate a results directory");
  summ->add_option("--in", in_dir, "directory containing results.csv")->required();

  app.add_subcommand("list-scenarios", "print the built-in scenario presets");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("run")) return cmd_run(config_path, seed, reps, jobs, out_dir, dump_ed);
    if (app.got_subcommand("summarize")) return cmd_summarize(in_dir);
    return cmd_list();
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
