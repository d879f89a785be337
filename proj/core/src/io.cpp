#include "sdm/io.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include "json.hpp"
#include "sdm/errors.hpp"
#include "sdm/rng.hpp"

namespace sdm {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
    --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(start)));
      return fields;
    }
    fields.push_back(
        trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_cell(const std::string& cell, const std::string& path,
                  long line_no, const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw DataError("'" + path + "' line " + std::to_string(line_no) +
                    ": column '" + column + "' value '" + cell +
                    "' is not a finite number");
  }
  return value;
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot open '" + tmp + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw DataError("failed while writing '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw DataError("cannot move temporary file onto '" + path +
                    "': " + ec.message());
  }
}

json config_json(const RunConfig& c) {
  json j;
  j["mode"] = c.mode;
  j["variant"] = to_string(c.variant);
  j["n_states"] = c.n_states;
  j["floor"] = c.floor;
  j["sweep"] = to_string(c.sweep);
  j["standardize"] = to_string(c.standardize);
  j["input"] = c.input;
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["family"] = to_string(c.family);
  j["length"] = c.length;
  j["sigma_u"] = c.sigma_u;
  j["ar_coefficient"] = c.ar_coefficient;
  j["families"] = c.families;
  j["sigma_grid"] = c.sigma_grid;
  j["trials"] = c.trials;
  j["seed_base"] = c.seed_base;
  j["jobs"] = c.jobs;
  j["x_column"] = c.x_column;
  j["y_column"] = c.y_column;
  return j;
}

void append_comment_header(std::string& out, const RunConfig& config) {
  out += "# config: " + config_json_string(config) + "\n";
  out += "# rng: ";
  out += Rng::kAlgorithm;
  out += "\n";
}

}  // namespace

std::string_view to_string(StandardizeMode mode) {
  switch (mode) {
    case StandardizeMode::kNone: return "none";
    case StandardizeMode::kGlobalZ: return "global-z";
    case StandardizeMode::kExpandingZ: return "expanding-z";
  }
  throw ArgumentError("unknown standardize mode value");
}

StandardizeMode standardize_mode_from_string(std::string_view name) {
  if (name == "none") return StandardizeMode::kNone;
  if (name == "global-z") return StandardizeMode::kGlobalZ;
  if (name == "expanding-z") return StandardizeMode::kExpandingZ;
  throw ConfigError("unknown standardize mode '" + std::string(name) +
                    "' (expected none, global-z, or expanding-z)");
}

std::string_view to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::kPseudocode: return "pseudocode";
    case SweepMode::kFreshBuffer: return "fresh-buffer";
  }
  throw ArgumentError("unknown sweep mode value");
}

SweepMode sweep_mode_from_string(std::string_view name) {
  if (name == "pseudocode") return SweepMode::kPseudocode;
  if (name == "fresh-buffer") return SweepMode::kFreshBuffer;
  throw ConfigError("unknown sweep mode '" + std::string(name) +
                    "' (expected pseudocode or fresh-buffer)");
}

std::vector<double> standardize(const std::vector<double>& series,
                                StandardizeMode mode,
                                std::size_t min_history) {
  if (series.size() < 2) {
    throw ArgumentError("standardization needs at least 2 points, got " +
                        std::to_string(series.size()));
  }
  if (mode == StandardizeMode::kNone) return series;

  std::vector<double> out(series.size());
  if (mode == StandardizeMode::kGlobalZ) {
    // Accumulate relative to the first point so a constant series yields
    // an exact zero variance instead of accumulation dust.
    const double shift = series[0];
    double sum = 0.0;
    for (double v : series) sum += v - shift;
    const double mean = shift + sum / static_cast<double>(series.size());
    double ss = 0.0;
    for (double v : series) {
      const double d = v - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(series.size()));
    if (!(sd > 0.0)) {
      throw DataError("series has zero variance, cannot z-score");
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
      out[i] = (series[i] - mean) / sd;
    }
    return out;
  }

  // Expanding z: Welford running mean and sum of squared deviations, so
  // each point sees only itself and its past.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double count = static_cast<double>(i + 1);
    const double delta = series[i] - mean;
    mean += delta / count;
    m2 += delta * (series[i] - mean);
    if (i == 0) {
      out[i] = 0.0;
      continue;
    }
    const double sd = std::sqrt(m2 / count);
    if (sd > 0.0) {
      out[i] = (series[i] - mean) / sd;
    } else if (i + 1 <= min_history) {
      out[i] = 0.0;
    } else {
      throw DataError("zero variance through point " + std::to_string(i + 1) +
                      ", cannot expanding-z-score");
    }
  }
  return out;
}

LoadedPair load_pair(const std::string& path, const ColumnSpec& columns,
                     std::size_t min_rows) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open '" + path + "'");
  }

  std::string line;
  long line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) {
    throw DataError("'" + path + "': no header row found");
  }

  std::size_t x_idx = header.size();
  std::size_t y_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == columns.x) x_idx = i;
    if (header[i] == columns.y) y_idx = i;
  }
  if (x_idx == header.size()) {
    throw DataError("'" + path + "': column '" + columns.x +
                    "' not found in header");
  }
  if (y_idx == header.size()) {
    throw DataError("'" + path + "': column '" + columns.y +
                    "' not found in header");
  }

  LoadedPair pair;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw DataError("'" + path + "' line " + std::to_string(line_no) +
                      ": expected " + std::to_string(header.size()) +
                      " fields, got " + std::to_string(fields.size()));
    }
    pair.x.push_back(parse_cell(fields[x_idx], path, line_no, columns.x));
    pair.y.push_back(parse_cell(fields[y_idx], path, line_no, columns.y));
  }
  if (pair.x.size() < min_rows) {
    throw DataError("'" + path + "': need at least " +
                    std::to_string(min_rows) + " data rows, got " +
                    std::to_string(pair.x.size()));
  }
  return pair;
}

std::string fmt17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string config_json_string(const RunConfig& config) {
  return config_json(config).dump();
}

void write_pair_csv(const std::string& path, const SimulatedPair& pair,
                    const RunConfig& config) {
  std::string out;
  out.reserve(64 * pair.x.size() + 256);
  append_comment_header(out, config);
  out += "t,x,y,tau\n";
  for (std::size_t i = 0; i < pair.x.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += fmt17(pair.x[i]);
    out += ',';
    out += fmt17(pair.y[i]);
    out += ',';
    out += std::to_string(pair.lag_path.taus[i]);
    out += '\n';
  }
  write_atomic(path, out);
}

void write_config_sidecar(const std::string& path, const RunConfig& config) {
  json j;
  j["config"] = config_json(config);
  j["rng"] = Rng::kAlgorithm;
  j["timestamp"] = timestamp_utc();
  write_atomic(path, j.dump(2) + "\n");
}

void write_heatmap_csv(const std::string& path,
                       const std::vector<StepTrace>& traces, Variant variant,
                       std::size_t n_states, const RunConfig& config) {
  const bool matrix = variant != Variant::kUni;
  const std::size_t n_weights = matrix ? 2 * n_states : n_states;
  const bool bidirectional = variant == Variant::kBidirectional;

  std::string out;
  out.reserve(32 * (n_weights + 8) * (traces.size() + 1));
  append_comment_header(out, config);
  out += 't';
  for (std::size_t i = 1; i <= n_states; ++i) {
    out += ",w" + std::to_string(i);
    if (matrix) out += "_1";
  }
  if (matrix) {
    for (std::size_t i = 1; i <= n_states; ++i) {
      out += ",w" + std::to_string(i) + "_2";
    }
  }
  out += ",theta,lambda,v,u2,y_hat";
  if (bidirectional) out += ",x_hat";
  out += '\n';

  for (const StepTrace& trace : traces) {
    if (trace.weights.size() != n_weights) {
      throw ArgumentError("trace at t=" + std::to_string(trace.t) + " has " +
                          std::to_string(trace.weights.size()) +
                          " weights, expected " + std::to_string(n_weights));
    }
    out += std::to_string(trace.t);
    for (double w : trace.weights) {
      out += ',';
      out += fmt17(w);
    }
    out += ',';
    out += fmt17(trace.theta);
    out += ',';
    out += fmt17(trace.lambda);
    out += ',';
    out += fmt17(trace.transition_error);
    out += ',';
    out += fmt17(trace.weighted_residual);
    out += ',';
    out += fmt17(trace.y_hat);
    if (bidirectional) {
      out += ',';
      out += fmt17(trace.x_hat);
    }
    out += '\n';
  }
  write_atomic(path, out);
}

void write_forecast_csv(const std::string& path,
                        const std::vector<ForecastRecord>& records,
                        const RunConfig& config) {
  std::string out;
  out.reserve(48 * records.size() + 256);
  append_comment_header(out, config);
  out += "t,y,y_hat\n";
  for (const ForecastRecord& r : records) {
    out += std::to_string(r.t);
    out += ',';
    out += fmt17(r.y);
    out += ',';
    out += fmt17(r.y_hat);
    out += '\n';
  }
  write_atomic(path, out);
}

void write_fit_summary_json(const std::string& path, const FitSummary& summary,
                            const RunConfig& config) {
  json j;
  j["config"] = config_json(config);
  j["rng"] = Rng::kAlgorithm;
  j["timestamp"] = timestamp_utc();
  j["summary"]["scored_steps"] = summary.scored_steps;
  j["summary"]["first_scored_t"] = summary.first_scored_t;
  j["summary"]["rmse"] = summary.rmse;
  j["summary"]["persistence_rmse"] = summary.persistence_rmse;
  j["summary"]["final_theta"] = summary.final_theta;
  j["summary"]["final_lambda"] = summary.final_lambda;
  write_atomic(path, j.dump(2) + "\n");
}

void write_benchmark_cells_csv(const std::string& path,
                               const BenchmarkReport& report,
                               const RunConfig& config) {
  std::string out;
  out.reserve(256);
  append_comment_header(out, config);
  out += "family,sigma_u,trial,seed,rmse,fe\n";
  for (const BenchmarkCell& cell : report.cells) {
    for (std::size_t k = 0; k < cell.trials; ++k) {
      out += to_string(cell.family);
      out += ',';
      out += fmt17(cell.sigma_u);
      out += ',';
      out += std::to_string(k);
      out += ',';
      out += std::to_string(cell.seeds[k]);
      out += ',';
      out += fmt17(cell.rmse_values[k]);
      out += ',';
      out += fmt17(cell.fe_values[k]);
      out += '\n';
    }
  }
  write_atomic(path, out);
}

void write_benchmark_report_json(const std::string& path,
                                 const BenchmarkReport& report,
                                 const RunConfig& config) {
  json j;
  j["config"] = config_json(config);
  j["rng"] = Rng::kAlgorithm;
  j["timestamp"] = timestamp_utc();

  json grid;
  json family_names = json::array();
  for (Family f : report.config.families) family_names.push_back(to_string(f));
  grid["families"] = family_names;
  grid["sigma_grid"] = report.config.sigma_grid;
  grid["trials"] = report.config.trials;
  grid["seed_base"] = report.config.seed_base;
  grid["length"] = report.config.length;
  grid["ar_coefficient"] = report.config.ar_coefficient;
  grid["n_states"] = report.config.run.filter.n_states;
  grid["floor"] = report.config.run.filter.floor;
  grid["sweep"] = to_string(report.config.run.filter.sweep);
  grid["variant"] = to_string(report.config.run.variant);
  j["grid"] = grid;

  json cells = json::array();
  for (const BenchmarkCell& cell : report.cells) {
    json c;
    c["family"] = to_string(cell.family);
    c["sigma_u"] = cell.sigma_u;
    c["trials"] = cell.trials;
    c["mean_rmse"] = cell.mean_rmse;
    c["se_rmse"] = cell.se_rmse;
    c["mean_fe"] = cell.mean_fe;
    c["se_fe"] = cell.se_fe;
    cells.push_back(std::move(c));
  }
  j["cells"] = cells;
  write_atomic(path, j.dump(2) + "\n");
}

}  // namespace sdm
