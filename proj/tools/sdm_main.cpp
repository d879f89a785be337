#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdm/errors.hpp"
#include "sdm/io.hpp"
#include "sdm/metrics.hpp"
#include "sdm/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDegenerate = 3;

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int run_simulate(const sdm::RunConfig& rc) {
  sdm::SimConfig sim;
  sim.family = rc.family;
  sim.length = rc.length;
  sim.sigma_u = rc.sigma_u;
  sim.ar_coefficient = rc.ar_coefficient;
  sim.seed = rc.seed;
  const sdm::SimulatedPair pair = sdm::make_pair(sim);
  sdm::write_pair_csv(rc.output, pair, rc);
  sdm::write_config_sidecar(rc.output + ".meta.json", rc);
  std::printf("wrote %s (%zu rows) and %s.meta.json\n", rc.output.c_str(),
              pair.x.size(), rc.output.c_str());
  return kExitOk;
}

int run_fit(const sdm::RunConfig& rc) {
  const sdm::LoadedPair data =
      sdm::load_pair(rc.input, {rc.x_column, rc.y_column}, rc.n_states + 2);
  const std::vector<double> x = sdm::standardize(data.x, rc.standardize);
  const std::vector<double> y = sdm::standardize(data.y, rc.standardize);

  sdm::RunOptions opts;
  opts.variant = rc.variant;
  opts.filter.n_states = rc.n_states;
  opts.filter.floor = rc.floor;
  opts.filter.sweep = rc.sweep;
  const sdm::SeriesRunResult run = sdm::run_series(x, y, opts);
  if (run.records.empty()) {
    throw sdm::DataError("no defined forecasts were produced");
  }

  sdm::FitSummary summary;
  summary.scored_steps = run.records.size();
  summary.first_scored_t = run.records.front().t;
  summary.rmse = sdm::rmse(run.records);
  std::vector<sdm::ForecastRecord> persistence;
  persistence.reserve(run.records.size());
  for (const sdm::ForecastRecord& r : run.records) {
    persistence.push_back({r.t, y[static_cast<std::size_t>(r.t) - 2], r.y});
  }
  summary.persistence_rmse = sdm::rmse(persistence);
  summary.final_theta = run.final_theta;
  summary.final_lambda = run.final_lambda;

  sdm::write_heatmap_csv(rc.output + ".heatmap.csv", run.traces, rc.variant,
                         rc.n_states, rc);
  sdm::write_forecast_csv(rc.output + ".forecast.csv", run.records, rc);
  sdm::write_fit_summary_json(rc.output + ".summary.json", summary, rc);

  std::printf("scored %zu steps from t=%ld: rmse %s, persistence %s\n",
              summary.scored_steps, summary.first_scored_t,
              fmt6(summary.rmse).c_str(),
              fmt6(summary.persistence_rmse).c_str());
  std::printf("wrote %s.heatmap.csv, %s.forecast.csv, %s.summary.json\n",
              rc.output.c_str(), rc.output.c_str(), rc.output.c_str());
  return kExitOk;
}

int run_benchmark_cmd(const sdm::RunConfig& rc) {
  sdm::BenchmarkConfig bc;
  bc.families.clear();
  for (const std::string& name : rc.families) {
    bc.families.push_back(sdm::family_from_string(name));
  }
  bc.sigma_grid = rc.sigma_grid;
  bc.trials = rc.trials;
  bc.seed_base = rc.seed_base;
  bc.length = rc.length;
  bc.ar_coefficient = rc.ar_coefficient;
  bc.run.variant = rc.variant;
  bc.run.filter.n_states = rc.n_states;
  bc.run.filter.floor = rc.floor;
  bc.run.filter.sweep = rc.sweep;
  bc.jobs = rc.jobs;

  const sdm::BenchmarkReport report = sdm::run_benchmark(bc);
  sdm::write_benchmark_cells_csv(rc.output + ".cells.csv", report, rc);
  sdm::write_benchmark_report_json(rc.output + ".report.json", report, rc);

  std::printf("%-6s %9s %11s %11s %9s\n", "family", "sigma_u", "mean_rmse",
              "mean_fe", "se_fe");
  for (const sdm::BenchmarkCell& cell : report.cells) {
    std::printf("%-6s %9s %11s %11s %9s\n",
                std::string(sdm::to_string(cell.family)).c_str(),
                fmt6(cell.sigma_u).c_str(), fmt6(cell.mean_rmse).c_str(),
                fmt6(cell.mean_fe).c_str(), fmt6(cell.se_fe).c_str());
  }
  std::printf("wrote %s.cells.csv and %s.report.json\n", rc.output.c_str(),
              rc.output.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Tracks a time-varying lag between two series on a grid of lag "
      "beliefs and forecasts one step ahead."};
  app.set_version_flag("--version", std::string("sdm ") + SDM_VERSION);
  app.set_config("--config", "",
                 "Read options from a key=value config file; command-line "
                 "flags override it");
  app.require_subcommand(1);

  sdm::RunConfig rc;
  std::string family_s = "f1";
  std::string variant_s = "uni";
  std::string sweep_s = "pseudocode";
  std::string standardize_s = "none";

  const std::vector<std::string> family_names = {"f1", "f2", "f3", "f4", "f5"};
  const std::vector<std::string> variant_names = {"uni", "bidirectional",
                                                  "posneg"};
  const std::vector<std::string> sweep_names = {"pseudocode", "fresh-buffer"};
  const std::vector<std::string> standardize_names = {"none", "global-z",
                                                      "expanding-z"};

  CLI::App* sim = app.add_subcommand(
      "simulate", "Generate a synthetic series pair with a known lag path");
  sim->fallthrough();
  sim->add_option("-o,--output", rc.output, "Output CSV path")->required();
  sim->add_option("--family", family_s, "Series construction f1..f5")
      ->required()
      ->check(CLI::IsMember(family_names));
  sim->add_option("--length", rc.length, "Points to emit")
      ->capture_default_str();
  sim->add_option("--sigma-u", rc.sigma_u, "Measurement noise level")
      ->capture_default_str();
  sim->add_option("--ar", rc.ar_coefficient, "AR(1) coefficient of x")
      ->capture_default_str();
  sim->add_option("--seed", rc.seed, "Generator seed")
      ->envname("SDM_SEED")
      ->capture_default_str();

  CLI::App* fit = app.add_subcommand(
      "fit", "Run the filter over a CSV pair and dump weights and forecasts");
  fit->fallthrough();
  fit->add_option("-i,--input", rc.input, "Input CSV with headered columns")
      ->required();
  fit->add_option("-o,--output", rc.output,
                  "Output prefix for .heatmap.csv, .forecast.csv, "
                  ".summary.json")
      ->required();
  fit->add_option("--x-column", rc.x_column, "Leading series column name")
      ->capture_default_str();
  fit->add_option("--y-column", rc.y_column, "Lagging series column name")
      ->capture_default_str();
  fit->add_option("--variant", variant_s, "Filter structure")
      ->check(CLI::IsMember(variant_names))
      ->capture_default_str();
  fit->add_option("--n-states", rc.n_states, "Number of lag states")
      ->capture_default_str();
  fit->add_option("--floor", rc.floor, "Posterior probability floor")
      ->capture_default_str();
  fit->add_option("--sweep", sweep_s, "Forward-projection sweep")
      ->check(CLI::IsMember(sweep_names))
      ->capture_default_str();
  fit->add_option("--standardize", standardize_s, "Input rescaling")
      ->check(CLI::IsMember(standardize_names))
      ->capture_default_str();

  CLI::App* bench = app.add_subcommand(
      "benchmark", "Score the filter over simulated families and noise grid");
  bench->fallthrough();
  bench
      ->add_option("-o,--output", rc.output,
                   "Output prefix for .cells.csv and .report.json")
      ->required();
  bench
      ->add_option("--families", rc.families,
                   "Families to run (default: all five)")
      ->check(CLI::IsMember(family_names));
  bench->add_option("--sigma-grid", rc.sigma_grid,
                    "Noise levels (default: 0.1 0.25 0.5 1.0 1.5 2.0)");
  bench->add_option("--trials", rc.trials, "Trials per cell")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
      ->capture_default_str();
  bench->add_option("--seed-base", rc.seed_base, "Trial k uses seed-base + k")
      ->envname("SDM_SEED")
      ->capture_default_str();
  bench->add_option("--length", rc.length, "Points per simulated pair")
      ->capture_default_str();
  bench->add_option("--ar", rc.ar_coefficient, "AR(1) coefficient of x")
      ->capture_default_str();
  bench->add_option("--variant", variant_s, "Filter structure")
      ->check(CLI::IsMember(variant_names))
      ->capture_default_str();
  bench->add_option("--n-states", rc.n_states, "Number of lag states")
      ->capture_default_str();
  bench->add_option("--floor", rc.floor, "Posterior probability floor")
      ->capture_default_str();
  bench->add_option("--sweep", sweep_s, "Forward-projection sweep")
      ->check(CLI::IsMember(sweep_names))
      ->capture_default_str();
  bench
      ->add_option("--jobs", rc.jobs,
                   "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    rc.family = sdm::family_from_string(family_s);
    rc.variant = sdm::variant_from_string(variant_s);
    rc.sweep = sdm::sweep_mode_from_string(sweep_s);
    rc.standardize = sdm::standardize_mode_from_string(standardize_s);
    if (*sim) {
      rc.mode = "simulate";
      return run_simulate(rc);
    }
    if (*fit) {
      rc.mode = "fit";
      return run_fit(rc);
    }
    rc.mode = "benchmark";
    if (rc.families.empty()) rc.families = family_names;
    if (rc.sigma_grid.empty()) {
      rc.sigma_grid.assign(sdm::kDefaultSigmaGrid.begin(),
                           sdm::kDefaultSigmaGrid.end());
    }
    return run_benchmark_cmd(rc);
  } catch (const sdm::DegenerateUpdateError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDegenerate;
  } catch (const sdm::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const sdm::ArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const sdm::DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
}
