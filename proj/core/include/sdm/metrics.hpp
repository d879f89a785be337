#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "sdm/filter.hpp"
#include "sdm/simulation.hpp"

namespace sdm {

/// Noise levels of the default benchmark grid, spanning the low-noise
/// region up through twice the signal scale.
inline constexpr std::array<double, 6> kDefaultSigmaGrid = {0.1, 0.25, 0.5,
                                                            1.0,  1.5, 2.0};

/// One scored forecast. y_hat is produced strictly from information
/// available before t (prior weights, leading series through t-1).
struct ForecastRecord {
  long t = 0;
  double y_hat = 0.0;
  double y = 0.0;
};

/// Root-mean-square error of y_hat against y. Input must be non-empty.
double rmse(const std::vector<ForecastRecord>& records);

/// Deviation of the achieved error from the noise floor: rmse - sigma_u.
/// Zero means the forecast errs exactly as much as an oracle knowing the
/// true lag path; negative values are sampling noise.
double fe_stat(double rmse_value, double sigma_u);

/// Which filter structure to run: the single-direction lag grid, the
/// two-direction matrix, or the sign-regime matrix.
enum class Variant { kUni, kBidirectional, kPosNeg };

std::string_view to_string(Variant variant);
Variant variant_from_string(std::string_view name);

struct RunOptions {
  Variant variant = Variant::kUni;
  FilterOptions filter;
};

/// Everything observable about one processed time step: the forecast
/// made before the observation arrived, the parameter estimates that
/// drove the step, and the posterior weights after it.
struct StepTrace {
  long t = 0;
  double theta = 0.0;
  double lambda = 0.0;
  double transition_error = 0.0;
  double weighted_residual = 0.0;
  double y_hat = std::numeric_limits<double>::quiet_NaN();
  double x_hat = std::numeric_limits<double>::quiet_NaN();
  bool y_hat_defined = false;
  bool x_hat_defined = false;
  /// Posterior weights w_t; for matrix variants column 1 then column 2.
  std::vector<double> weights;
  double col1_mass = 0.0;
  double col2_mass = 0.0;
  /// 1-based lag holding the largest weight (in the heavier column for
  /// matrix variants).
  std::size_t argmax = 0;
};

struct SeriesRunResult {
  /// One trace per step t = n_states+1 .. T.
  std::vector<StepTrace> traces;
  /// Scored forecasts; for the bi-directional variant only steps whose
  /// y-forecast was defined.
  std::vector<ForecastRecord> records;
  /// Parameter estimates after the last step, i.e. the values that
  /// would drive the next one.
  double final_theta = 0.0;
  double final_lambda = 1.0;
};

/// Stream a pair through the selected variant's filter. For each step
/// the forecast is made first, from the pre-update weights, then the
/// observation at t is folded in.
SeriesRunResult run_series(const std::vector<double>& x,
                           const std::vector<double>& y,
                           const RunOptions& options);

struct TrialResult {
  double rmse = 0.0;
  double fe = 0.0;
  /// First scored time step (= n_states + 1).
  long first_t = 0;
  /// Posterior argmax lag per scored step, aligned with tau_path.
  std::vector<std::size_t> argmax_path;
  std::vector<int> tau_path;
};

/// Simulate one pair and score it end to end.
TrialResult run_trial(const SimConfig& config, const RunOptions& options);

struct BenchmarkConfig {
  std::vector<Family> families = {Family::kF1, Family::kF2, Family::kF3,
                                  Family::kF4, Family::kF5};
  std::vector<double> sigma_grid{kDefaultSigmaGrid.begin(),
                                 kDefaultSigmaGrid.end()};
  std::size_t trials = 50;
  std::uint64_t seed_base = 0;
  std::size_t length = 600;
  double ar_coefficient = 0.9;
  RunOptions run;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t jobs = 0;
};

struct BenchmarkCell {
  Family family = Family::kF1;
  double sigma_u = 0.0;
  std::size_t trials = 0;
  double mean_rmse = 0.0;
  double mean_fe = 0.0;
  double se_rmse = 0.0;
  double se_fe = 0.0;
  /// Raw per-trial values in trial order, for external plotting.
  std::vector<double> rmse_values;
  std::vector<double> fe_values;
  std::vector<std::uint64_t> seeds;
};

struct BenchmarkReport {
  BenchmarkConfig config;
  /// Cells in family-major, then sigma order.
  std::vector<BenchmarkCell> cells;
};

/// Full cross product of families and noise levels, `trials` runs each.
/// Trial seeds are seed_base + trial_index. Trials run in parallel;
/// aggregation is a deterministic reduction in trial order, so the
/// report is identical regardless of the job count.
BenchmarkReport run_benchmark(const BenchmarkConfig& config);

}  // namespace sdm
