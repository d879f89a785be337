#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sdm/metrics.hpp"
#include "sdm/simulation.hpp"

namespace sdm {

/// How input series are rescaled before filtering. Global z-scoring uses
/// the full-series mean and standard deviation, which matches the
/// batch framing but leaks future information into early points; the
/// expanding mode standardizes each point with statistics of the points
/// up to and including it and is safe for forecasting. Simulated series
/// are already unit-scale, so the default is no rescaling.
enum class StandardizeMode { kNone, kGlobalZ, kExpandingZ };

std::string_view to_string(StandardizeMode mode);
StandardizeMode standardize_mode_from_string(std::string_view name);

/// Points tolerated at zero variance before expanding-z standardization
/// gives up on a series (a constant prefix shorter than this emits 0).
inline constexpr std::size_t kDefaultMinHistory = 10;

std::vector<double> standardize(const std::vector<double>& series,
                                StandardizeMode mode,
                                std::size_t min_history = kDefaultMinHistory);

struct ColumnSpec {
  std::string x = "x";
  std::string y = "y";
};

struct LoadedPair {
  std::vector<double> x;
  std::vector<double> y;
};

/// Read two named numeric columns from a headered CSV. Lines starting
/// with '#' are skipped. Ragged rows, non-numeric or non-finite cells,
/// missing columns, and files shorter than min_rows are all rejected
/// with the offending line number.
LoadedPair load_pair(const std::string& path, const ColumnSpec& columns,
                     std::size_t min_rows);

/// Shortest decimal representation that round-trips a double (17
/// significant digits).
std::string fmt17(double value);

/// Everything the command line can configure, recorded verbatim in the
/// metadata block of every output artifact.
struct RunConfig {
  std::string mode;
  Variant variant = Variant::kUni;
  std::size_t n_states = 30;
  double floor = kDefaultFloor;
  SweepMode sweep = SweepMode::kPseudocode;
  StandardizeMode standardize = StandardizeMode::kNone;
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  // simulate
  Family family = Family::kF1;
  std::size_t length = 600;
  double sigma_u = 0.0;
  double ar_coefficient = 0.9;
  // benchmark
  std::vector<std::string> families;
  std::vector<double> sigma_grid;
  std::size_t trials = 50;
  std::uint64_t seed_base = 0;
  std::size_t jobs = 0;
  // input columns
  std::string x_column = "x";
  std::string y_column = "y";
};

std::string_view to_string(SweepMode mode);
SweepMode sweep_mode_from_string(std::string_view name);

/// Compact JSON rendering of a RunConfig, embedded in CSV comment
/// headers and JSON metadata blocks.
std::string config_json_string(const RunConfig& config);

void write_pair_csv(const std::string& path, const SimulatedPair& pair,
                    const RunConfig& config);

/// JSON sidecar (config, generator identity, timestamp) next to a data
/// file; written to `path`.
void write_config_sidecar(const std::string& path, const RunConfig& config);

void write_heatmap_csv(const std::string& path,
                       const std::vector<StepTrace>& traces, Variant variant,
                       std::size_t n_states, const RunConfig& config);

void write_forecast_csv(const std::string& path,
                        const std::vector<ForecastRecord>& records,
                        const RunConfig& config);

struct FitSummary {
  std::size_t scored_steps = 0;
  long first_scored_t = 0;
  double rmse = 0.0;
  /// RMSE of the naive forecast y_hat_t = y_{t-1} over the same steps.
  double persistence_rmse = 0.0;
  double final_theta = 0.0;
  double final_lambda = 0.0;
};

void write_fit_summary_json(const std::string& path, const FitSummary& summary,
                            const RunConfig& config);

/// Raw per-trial values, one row per (family, sigma_u, trial).
void write_benchmark_cells_csv(const std::string& path,
                               const BenchmarkReport& report,
                               const RunConfig& config);

void write_benchmark_report_json(const std::string& path,
                                 const BenchmarkReport& report,
                                 const RunConfig& config);

}  // namespace sdm
