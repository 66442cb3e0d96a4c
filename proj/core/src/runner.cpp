#include "stokrig/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "stokrig/rng.hpp"

namespace stokrig {

namespace {

// Per-rep stream layout: block of 16 indices per macro-rep.
//   rep*16 + 0  design sampling (LHS)
//   rep*16 + 1  simulation draws
//   rep*16 + 2+ GA seed per surrogate (by position in spec.surrogates)
// Validation-set streams live far outside the rep blocks.
constexpr std::uint64_t kRepStride = 16;
constexpr std::uint64_t kVsPointsIndex = 0xFFFFFFFF00000000ull;
constexpr std::uint64_t kVsDrawsIndex = 0xFFFFFFFF00000001ull;

std::string fmt_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double true_mean_at(const ScenarioSpec& spec, const Eigen::VectorXd& x) {
  switch (spec.kind) {
    case CaseKind::MM1Known:
    case CaseKind::MM1Budget: return mm1_true(x(0), spec.run_length).first;
    case CaseKind::EggBox: return eggbox_mean(x(0), x(1));
    case CaseKind::Ishigami: return ishigami_mean(x(0), x(1), x(2));
  }
  return 0.0;
}

// Variance of a single replication draw; drives both the allocation rule and
// the synthetic noise widths.
double true_draw_variance(const ScenarioSpec& spec, const Eigen::VectorXd& x) {
  switch (spec.kind) {
    case CaseKind::MM1Known:
    case CaseKind::MM1Budget: return mm1_true(x(0), spec.run_length).second;
    case CaseKind::EggBox: {
      double w = eggbox_noise_width(x(0), x(1));
      return spec.noise_reading == NoiseReading::Variance ? w : w * w;
    }
    case CaseKind::Ishigami: {
      double w = ishigami_noise_width(x(0), x(1), x(2));
      return spec.noise_reading == NoiseReading::Variance ? w : w * w;
    }
  }
  return 0.0;
}

double draw_output(const ScenarioSpec& spec, const Eigen::VectorXd& x, rng::Engine& eng) {
  switch (spec.kind) {
    case CaseKind::MM1Known:
    case CaseKind::MM1Budget:
      return spec.use_des ? mm1_simulate(x(0), spec.run_length, eng)
                          : synthetic_known_noise(x(0), spec.run_length, eng);
    case CaseKind::EggBox: return eggbox(x(0), x(1), eng, spec.noise_reading);
    case CaseKind::Ishigami: return ishigami(x(0), x(1), x(2), eng, spec.noise_reading);
  }
  return 0.0;
}

Eigen::MatrixXd design_points(const ScenarioSpec& spec, int rep) {
  const int m = spec.dimension();
  if (spec.kind == CaseKind::MM1Known || spec.kind == CaseKind::MM1Budget) {
    // k equispaced arrival rates on [0.3, 0.9]; same sites every rep.
    Eigen::MatrixXd pts(spec.k, 1);
    for (int i = 0; i < spec.k; ++i) {
      pts(i, 0) = 0.3 + 0.6 * static_cast<double>(i) / (spec.k - 1);
    }
    return pts;
  }
  std::uint64_t seed =
      rng::derive_seed(spec.seed, static_cast<std::uint64_t>(rep) * kRepStride + 0);
  return lhs_design(m, spec.k, spec.domain_lo(), spec.domain_hi(), seed);
}

ExperimentalDesign build_design(const ScenarioSpec& spec, int rep) {
  Eigen::MatrixXd pts = design_points(spec, rep);
  rng::Engine sim = rng::derive_stream(
      spec.seed, static_cast<std::uint64_t>(rep) * kRepStride + 1);

  if (spec.kind == CaseKind::MM1Known) {
    Eigen::VectorXd means(spec.k), variances(spec.k);
    for (int i = 0; i < spec.k; ++i) {
      Eigen::VectorXd x = pts.row(i).transpose();
      means(i) = draw_output(spec, x, sim);
      variances(i) = true_draw_variance(spec, x);
    }
    return ExperimentalDesign::with_known_variances(std::move(pts), std::move(means),
                                                    std::move(variances));
  }

  Eigen::VectorXd variances(spec.k);
  for (int i = 0; i < spec.k; ++i) {
    variances(i) = true_draw_variance(spec, pts.row(i).transpose());
  }
  // Sample-variance estimation needs two replications per point.
  std::vector<int> n = allocate_replications(variances, spec.budget, 2);
  std::vector<std::vector<double>> outputs(static_cast<std::size_t>(spec.k));
  for (int i = 0; i < spec.k; ++i) {
    Eigen::VectorXd x = pts.row(i).transpose();
    auto& reps = outputs[static_cast<std::size_t>(i)];
    reps.reserve(static_cast<std::size_t>(n[static_cast<std::size_t>(i)]));
    for (int r = 0; r < n[static_cast<std::size_t>(i)]; ++r) {
      reps.push_back(draw_output(spec, x, sim));
    }
  }
  return ExperimentalDesign::from_raw(std::move(pts), std::move(outputs));
}

ValidationSet build_validation_set(const ScenarioSpec& spec) {
  ValidationSet vs;
  const int m = spec.dimension();
  const int big_k = spec.validation_points;

  if (spec.kind == CaseKind::MM1Known || spec.kind == CaseKind::MM1Budget) {
    vs.points.resize(big_k, 1);
    for (int i = 0; i < big_k; ++i) {
      vs.points(i, 0) = 0.3 + 0.6 * static_cast<double>(i) / (big_k - 1);
    }
  } else {
    std::uint64_t seed = rng::derive_seed(spec.seed, kVsPointsIndex);
    vs.points = lhs_design(m, big_k, spec.domain_lo(), spec.domain_hi(), seed);
  }

  vs.true_means.resize(big_k);
  for (int i = 0; i < big_k; ++i) {
    vs.true_means(i) = true_mean_at(spec, vs.points.row(i).transpose());
  }

  if (spec.kind == CaseKind::MM1Known) {
    // Known-noise protocol: the draw variance is available analytically.
    double mean_v = 0.0;
    for (int i = 0; i < big_k; ++i) {
      mean_v += true_draw_variance(spec, vs.points.row(i).transpose());
    }
    vs.sigma_vs = std::sqrt(mean_v / big_k);
  } else {
    // One stochastic draw per validation point.
    rng::Engine eng = rng::derive_stream(spec.seed, kVsDrawsIndex);
    Eigen::VectorXd draws(big_k);
    for (int i = 0; i < big_k; ++i) {
      Eigen::VectorXd x = vs.points.row(i).transpose();
      draws(i) = true_mean_at(spec, x) +
                 std::sqrt(true_draw_variance(spec, x)) * rng::normal(eng);
    }
    vs.sigma_vs = sigma_vs(draws, vs.true_means);
  }
  return vs;
}

RunResult fit_and_score(const ScenarioSpec& spec, const ExperimentalDesign& ed,
                        const InputScaling& scaling, const ValidationSet& vs,
                        SurrogateKind surrogate, std::uint64_t ga_seed, int rep) {
  RunResult row;
  row.scenario = spec.id;
  row.surrogate = surrogate;
  row.rep = rep;
  row.seed = ga_seed;

  auto start = std::chrono::steady_clock::now();
  try {
    GaConfig ga;
    ga.seed = ga_seed;

    SkModel model = [&]() -> SkModel {
      switch (surrogate) {
        case SurrogateKind::OrdinarySk:
          return fit_sk(TrendModel::constant(spec.dimension()), ed, ga);
        case SurrogateKind::FullPceSk: {
          PceBasis basis = enumerate_basis(spec.dimension(), spec.full_degree, spec.q_norm);
          return fit_sk(TrendModel::full_pce(std::move(basis), scaling), ed, ga);
        }
        case SurrogateKind::LarPceSk:
        default:
          return fit_lar_pce_sk(ed, scaling, spec.lar_degree, spec.q_norm, ga).model;
      }
    }();

    Eigen::VectorXd pred(vs.size());
    for (Eigen::Index i = 0; i < vs.size(); ++i) {
      pred(i) = model.predict(vs.points.row(i).transpose()).mean;
    }
    row.ermse = ermse(pred, vs.true_means);
    row.nmae = nmae(pred, vs.true_means, vs.sigma_vs);
    row.selected_terms = model.trend().size();
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

ExperimentalDesign build_rep_design(const ScenarioSpec& spec, int rep) {
  spec.validate();
  if (rep < 0 || rep >= spec.macro_replications) {
    throw InvalidArgumentError("build_rep_design: rep out of range");
  }
  return build_design(spec, rep);
}

ScenarioRun run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  ScenarioRun run;
  run.spec = spec;
  run.vs = build_validation_set(spec);

  const InputScaling scaling = InputScaling::box(spec.domain_lo(), spec.domain_hi());
  const int reps = spec.macro_replications;
  const int n_surr = static_cast<int>(spec.surrogates.size());
  run.results.resize(static_cast<std::size_t>(reps) * n_surr);

  auto run_rep = [&](int rep) {
    ExperimentalDesign ed;
    bool ed_ok = true;
    std::string ed_error;
    try {
      ed = build_design(spec, rep);
    } catch (const std::exception& e) {
      ed_ok = false;
      ed_error = e.what();
    }
    for (int s = 0; s < n_surr; ++s) {
      std::uint64_t ga_seed = rng::derive_seed(
          spec.seed, static_cast<std::uint64_t>(rep) * kRepStride + 2 + static_cast<std::uint64_t>(s));
      RunResult row;
      if (ed_ok) {
        row = fit_and_score(spec, ed, scaling, run.vs, spec.surrogates[static_cast<std::size_t>(s)],
                            ga_seed, rep);
      } else {
        row.scenario = spec.id;
        row.surrogate = spec.surrogates[static_cast<std::size_t>(s)];
        row.rep = rep;
        row.seed = ga_seed;
        row.ok = false;
        row.error = "design construction failed: " + ed_error;
      }
      run.results[static_cast<std::size_t>(rep) * n_surr + static_cast<std::size_t>(s)] =
          std::move(row);
    }
  };

  int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    for (int rep = 0; rep < reps; ++rep) run_rep(rep);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int rep = next.fetch_add(1); rep < reps; rep = next.fetch_add(1)) run_rep(rep);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(jobs, reps); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  int failed = 0;
  for (int rep = 0; rep < reps; ++rep) {
    for (int s = 0; s < n_surr; ++s) {
      if (!run.results[static_cast<std::size_t>(rep) * n_surr + static_cast<std::size_t>(s)].ok) {
        ++failed;
        break;
      }
    }
  }
  run.failed_rep_fraction = static_cast<double>(failed) / reps;
  return run;
}

std::vector<SummaryRow> summarize(const std::vector<RunResult>& results) {
  if (results.empty()) return {};

  struct Key {
    std::string scenario;
    SurrogateKind surrogate;
    bool operator<(const Key& o) const {
      if (scenario != o.scenario) return scenario < o.scenario;
      return static_cast<int>(surrogate) < static_cast<int>(o.surrogate);
    }
  };
  std::map<Key, std::vector<const RunResult*>> groups;
  for (const auto& r : results) {
    if (r.ok) groups[{r.scenario, r.surrogate}].push_back(&r);
  }

  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  auto median_of = [](std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };

  std::vector<SummaryRow> rows;
  for (const auto& [key, group] : groups) {
    SummaryRow row;
    row.scenario = key.scenario;
    row.surrogate = key.surrogate;
    row.reps_ok = static_cast<int>(group.size());
    std::vector<double> e, n, t;
    for (const RunResult* r : group) {
      e.push_back(r->ermse);
      n.push_back(r->nmae);
      t.push_back(static_cast<double>(r->selected_terms));
    }
    row.mean_ermse = mean_of(e);
    row.median_ermse = median_of(e);
    row.mean_nmae = mean_of(n);
    row.median_nmae = median_of(n);
    row.mean_terms = mean_of(t);
    row.median_terms = median_of(t);
    rows.push_back(std::move(row));
  }

  // Improvement percentages against Ordinary SK within each scenario.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& row : rows) {
    row.mean_ermse_improvement_pct = nan;
    row.median_ermse_improvement_pct = nan;
    row.mean_nmae_improvement_pct = nan;
    if (row.surrogate == SurrogateKind::OrdinarySk) continue;
    for (const auto& base : rows) {
      if (base.scenario == row.scenario && base.surrogate == SurrogateKind::OrdinarySk &&
          base.reps_ok > 0) {
        if (base.mean_ermse > 0.0) {
          row.mean_ermse_improvement_pct = 100.0 * (base.mean_ermse - row.mean_ermse) / base.mean_ermse;
        }
        if (base.median_ermse > 0.0) {
          row.median_ermse_improvement_pct =
              100.0 * (base.median_ermse - row.median_ermse) / base.median_ermse;
        }
        if (base.mean_nmae > 0.0) {
          row.mean_nmae_improvement_pct = 100.0 * (base.mean_nmae - row.mean_nmae) / base.mean_nmae;
        }
      }
    }
  }
  return rows;
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string results_to_csv(const std::vector<RunResult>& results) {
  std::string out = "scenario,surrogate,rep,seed,status,ermse,nmae,selected_terms,error\n";
  for (const auto& r : results) {
    out += r.scenario + ',' + to_string(r.surrogate) + ',' + std::to_string(r.rep) + ',' +
           std::to_string(r.seed) + ',' + (r.ok ? "ok" : "failed") + ',';
    if (r.ok) {
      out += fmt_g12(r.ermse) + ',' + fmt_g12(r.nmae) + ',' + std::to_string(r.selected_terms);
    } else {
      out += ",,";
    }
    out += ',' + csv_quote(r.error) + '\n';
  }
  return out;
}

std::vector<RunResult> results_from_csv(const std::string& text) {
  std::vector<RunResult> results;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (int f = 0; f < 8; ++f) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) throw ConfigError("results csv: malformed row");
      fields.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    std::string error = line.substr(pos);
    if (error.size() >= 2 && error.front() == '"' && error.back() == '"') {
      error = error.substr(1, error.size() - 2);
      std::string unescaped;
      for (std::size_t i = 0; i < error.size(); ++i) {
        if (error[i] == '"' && i + 1 < error.size() && error[i + 1] == '"') ++i;
        unescaped += error[i];
      }
      error = unescaped;
    }
    RunResult r;
    r.scenario = fields[0];
    r.surrogate = surrogate_from_string(fields[1]);
    r.rep = std::stoi(fields[2]);
    r.seed = std::stoull(fields[3]);
    r.ok = fields[4] == "ok";
    if (r.ok) {
      r.ermse = std::stod(fields[5]);
      r.nmae = std::stod(fields[6]);
      r.selected_terms = std::stoi(fields[7]);
    }
    r.error = error;
    results.push_back(std::move(r));
  }
  return results;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "scenario,surrogate,reps_ok,mean_ermse,median_ermse,mean_nmae,median_nmae,"
      "mean_terms,median_terms,mean_ermse_improvement_pct,median_ermse_improvement_pct,"
      "mean_nmae_improvement_pct\n";
  for (const auto& r : rows) {
    out += r.scenario + ',' + to_string(r.surrogate) + ',' + std::to_string(r.reps_ok) + ',' +
           fmt_g12(r.mean_ermse) + ',' + fmt_g12(r.median_ermse) + ',' + fmt_g12(r.mean_nmae) +
           ',' + fmt_g12(r.median_nmae) + ',' + fmt_g12(r.mean_terms) + ',' +
           fmt_g12(r.median_terms) + ',';
    auto pct = [](double v) { return std::isnan(v) ? std::string() : fmt_g12(v); };
    out += pct(r.mean_ermse_improvement_pct) + ',' + pct(r.median_ermse_improvement_pct) + ',' +
           pct(r.mean_nmae_improvement_pct) + '\n';
  }
  return out;
}

std::string timings_to_csv(const std::vector<RunResult>& results) {
  std::string out = "scenario,surrogate,rep,wall_seconds\n";
  for (const auto& r : results) {
    out += r.scenario + ',' + to_string(r.surrogate) + ',' + std::to_string(r.rep) + ',' +
           fmt_g12(r.wall_seconds) + '\n';
  }
  return out;
}

std::string ed_to_csv(const ExperimentalDesign& ed) {
  std::string out;
  const int m = static_cast<int>(ed.dimension());
  for (int d = 0; d < m; ++d) out += "x" + std::to_string(d + 1) + ",";
  out += "n,outputs...\n";
  for (Eigen::Index i = 0; i < ed.size(); ++i) {
    for (int d = 0; d < m; ++d) out += fmt_g12(ed.points(i, d)) + ',';
    out += std::to_string(ed.replications[static_cast<std::size_t>(i)]);
    if (!ed.raw_outputs.empty()) {
      for (double v : ed.raw_outputs[static_cast<std::size_t>(i)]) out += ',' + fmt_g12(v);
    } else {
      out += ',' + fmt_g12(ed.sample_means(i));
    }
    out += '\n';
  }
  return out;
}

int write_run_outputs(const std::string& dir, const ScenarioRun& run) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + name + " in " + dir);
    f << content;
  };
  write("results.csv", results_to_csv(run.results));
  write("summary.csv", summary_to_csv(summarize(run.results)));
  write("timings.csv", timings_to_csv(run.results));

  nlohmann::ordered_json meta;
  meta["config"] = nlohmann::ordered_json::parse(scenario_to_json(run.spec));
  meta["validation"] = {
      {"points", run.spec.validation_points},
      {"layout", run.spec.dimension() == 1 ? "grid" : "lhs"},
      {"sigma_vs", run.vs.sigma_vs},
      {"sigma_vs_source",
       run.spec.kind == CaseKind::MM1Known ? "analytic" : "single-draw-per-point"},
  };
  meta["failed_rep_fraction"] = run.failed_rep_fraction;
  meta["library_version"] = "0.1.0";
  write("meta.json", meta.dump(2) + "\n");
  return 4;
}

}  // namespace stokrig
