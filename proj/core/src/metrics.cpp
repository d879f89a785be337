#include "sdm/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <tuple>
#include <utility>

#include "sdm/errors.hpp"
#include "sdm/measurement.hpp"

namespace sdm {

namespace {

std::pair<double, double> mean_and_se(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return {mean, sd / std::sqrt(static_cast<double>(values.size()))};
}

}  // namespace

double rmse(const std::vector<ForecastRecord>& records) {
  if (records.empty()) {
    throw ArgumentError("cannot score an empty forecast set");
  }
  double acc = 0.0;
  for (const ForecastRecord& r : records) {
    const double e = r.y_hat - r.y;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(records.size()));
}

double fe_stat(double rmse_value, double sigma_u) {
  return rmse_value - sigma_u;
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::kUni: return "uni";
    case Variant::kBidirectional: return "bidirectional";
    case Variant::kPosNeg: return "posneg";
  }
  throw ArgumentError("unknown variant value");
}

Variant variant_from_string(std::string_view name) {
  if (name == "uni") return Variant::kUni;
  if (name == "bidirectional") return Variant::kBidirectional;
  if (name == "posneg") return Variant::kPosNeg;
  throw ConfigError("unknown variant '" + std::string(name) +
                    "' (expected uni, bidirectional, or posneg)");
}

SeriesRunResult run_series(const std::vector<double>& x,
                           const std::vector<double>& y,
                           const RunOptions& options) {
  if (x.size() != y.size()) {
    throw ArgumentError("series lengths differ: " + std::to_string(x.size()) +
                        " vs " + std::to_string(y.size()));
  }
  const std::size_t n = options.filter.n_states;
  if (x.size() < n + 1) {
    throw ArgumentError("need at least n_states + 1 = " +
                        std::to_string(n + 1) + " points, got " +
                        std::to_string(x.size()));
  }

  SeriesRunResult out;
  const std::size_t t_end = x.size();
  out.traces.reserve(t_end - n);
  out.records.reserve(t_end - n);

  if (options.variant == Variant::kUni) {
    LagFilter filter(options.filter);
    for (std::size_t t = n + 1; t <= t_end; ++t) {
      const LagWindow xw = LagWindow::at(x, t, n);
      const double y_now = y[t - 1];
      StepTrace trace;
      trace.t = static_cast<long>(t);
      trace.y_hat = forecast_uni(filter.beliefs(), xw);
      trace.y_hat_defined = true;
      const StepDiagnostics diag = filter.step(distances_uni(xw, y_now));
      trace.theta = diag.theta;
      trace.lambda = diag.lambda;
      trace.transition_error = diag.transition_error;
      trace.weighted_residual = diag.weighted_residual;
      trace.weights = filter.beliefs().weights();
      trace.argmax = filter.beliefs().argmax_lag();
      out.records.push_back({trace.t, trace.y_hat, y_now});
      out.traces.push_back(std::move(trace));
    }
    out.final_theta = filter.diffusion().theta();
    out.final_lambda = filter.rate().lambda();
    return out;
  }

  const bool bidirectional = options.variant == Variant::kBidirectional;
  MatrixLagFilter filter(options.filter);
  for (std::size_t t = n + 1; t <= t_end; ++t) {
    const LagWindow xw = LagWindow::at(x, t, n);
    const double x_now = x[t - 1];
    const double y_now = y[t - 1];
    StepTrace trace;
    trace.t = static_cast<long>(t);
    DistanceMatrix d;
    if (bidirectional) {
      const LagWindow yw = LagWindow::at(y, t, n);
      const DirectionalForecast fc = forecast_bidirectional(
          filter.beliefs(), xw, yw, options.filter.floor);
      trace.y_hat = fc.y_hat;
      trace.x_hat = fc.x_hat;
      trace.y_hat_defined = fc.y_hat_defined;
      trace.x_hat_defined = fc.x_hat_defined;
      d = distances_bidirectional(xw, yw, x_now, y_now);
    } else {
      trace.y_hat = forecast_posneg(filter.beliefs(), xw);
      trace.y_hat_defined = true;
      d = distances_posneg(xw, y_now);
    }
    const StepDiagnostics diag = filter.step(d);
    trace.theta = diag.theta;
    trace.lambda = diag.lambda;
    trace.transition_error = diag.transition_error;
    trace.weighted_residual = diag.weighted_residual;
    const BeliefMatrix& w = filter.beliefs();
    trace.weights.reserve(2 * n);
    trace.weights.insert(trace.weights.end(), w.col1().begin(),
                         w.col1().end());
    trace.weights.insert(trace.weights.end(), w.col2().begin(),
                         w.col2().end());
    trace.col1_mass = w.col1_mass();
    trace.col2_mass = w.col2_mass();
    trace.argmax = w.argmax_lag(trace.col1_mass >= trace.col2_mass ? 1 : 2);
    if (trace.y_hat_defined) {
      out.records.push_back({trace.t, trace.y_hat, y_now});
    }
    out.traces.push_back(std::move(trace));
  }
  out.final_theta = filter.diffusion().theta();
  out.final_lambda = filter.rate().lambda();
  return out;
}

TrialResult run_trial(const SimConfig& config, const RunOptions& options) {
  const SimulatedPair pair = make_pair(config);
  const SeriesRunResult run = run_series(pair.x, pair.y, options);
  TrialResult result;
  result.rmse = rmse(run.records);
  result.fe = fe_stat(result.rmse, config.sigma_u);
  result.first_t = static_cast<long>(options.filter.n_states) + 1;
  result.argmax_path.reserve(run.traces.size());
  result.tau_path.reserve(run.traces.size());
  for (const StepTrace& trace : run.traces) {
    result.argmax_path.push_back(trace.argmax);
    result.tau_path.push_back(
        pair.lag_path.taus[static_cast<std::size_t>(trace.t) - 1]);
  }
  return result;
}

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
  if (config.trials < 1) throw ConfigError("trials must be at least 1");
  if (config.families.empty()) throw ConfigError("no families selected");
  if (config.sigma_grid.empty()) throw ConfigError("sigma grid is empty");
  for (double s : config.sigma_grid) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw ConfigError("sigma grid values must be finite and non-negative");
    }
  }

  const std::size_t n_cells =
      config.families.size() * config.sigma_grid.size();
  const std::size_t total = n_cells * config.trials;
  std::vector<double> rmse_store(total);
  std::vector<double> fe_store(total);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t j = next.fetch_add(1, std::memory_order_relaxed);
      if (j >= total) return;
      const std::size_t cell = j / config.trials;
      const std::size_t trial = j % config.trials;
      SimConfig sim;
      sim.family = config.families[cell / config.sigma_grid.size()];
      sim.length = config.length;
      sim.sigma_u = config.sigma_grid[cell % config.sigma_grid.size()];
      sim.ar_coefficient = config.ar_coefficient;
      sim.seed = config.seed_base + trial;
      try {
        const TrialResult r = run_trial(sim, config.run);
        rmse_store[j] = r.rmse;
        fe_store[j] = r.fe;
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) {
          first_error = std::current_exception();
        }
      }
    }
  };

  std::size_t jobs = config.jobs;
  if (jobs == 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    jobs = hc > 0 ? hc : 1;
  }
  jobs = std::min(jobs, total);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failed.load()) std::rethrow_exception(first_error);

  BenchmarkReport report;
  report.config = config;
  report.cells.reserve(n_cells);
  for (std::size_t fi = 0; fi < config.families.size(); ++fi) {
    for (std::size_t si = 0; si < config.sigma_grid.size(); ++si) {
      const std::size_t cell = fi * config.sigma_grid.size() + si;
      BenchmarkCell c;
      c.family = config.families[fi];
      c.sigma_u = config.sigma_grid[si];
      c.trials = config.trials;
      const auto begin = static_cast<std::ptrdiff_t>(cell * config.trials);
      const auto end = begin + static_cast<std::ptrdiff_t>(config.trials);
      c.rmse_values.assign(rmse_store.begin() + begin,
                           rmse_store.begin() + end);
      c.fe_values.assign(fe_store.begin() + begin, fe_store.begin() + end);
      c.seeds.reserve(config.trials);
      for (std::size_t k = 0; k < config.trials; ++k) {
        c.seeds.push_back(config.seed_base + k);
      }
      std::tie(c.mean_rmse, c.se_rmse) = mean_and_se(c.rmse_values);
      std::tie(c.mean_fe, c.se_fe) = mean_and_se(c.fe_values);
      report.cells.push_back(std::move(c));
    }
  }
  return report;
}

}  // namespace sdm
