#include "sdm/simulation.hpp"

#include <cmath>
#include <string>

#include "sdm/errors.hpp"

namespace sdm {

namespace {

// Value of the seven-term average at 1-based time t of x, lag tau.
// Ascending lag order, 1/7 applied per term; see apply_lag_averaged.
double averaged_lag_value(const std::vector<double>& x, std::size_t t,
                          int tau) {
  double acc = 0.0;
  for (int j = tau - 3; j <= tau + 3; ++j) {
    acc += (1.0 / 7.0) * x[t - static_cast<std::size_t>(j) - 1];
  }
  return acc;
}

void check_lag_path(const LagPath& lag_path, std::size_t expected) {
  if (lag_path.taus.size() != expected) {
    throw ArgumentError("lag path has " + std::to_string(lag_path.taus.size()) +
                        " entries for a series of length " +
                        std::to_string(expected));
  }
  for (int tau : lag_path.taus) {
    if (tau < 1) {
      throw ArgumentError("lag path entries must be positive");
    }
  }
}

// Shared scaffolding for the two lag transforms: find the first time
// step where `valid` holds, require it to hold through the end, and
// emit `value` plus noise from there on.
template <typename ValidFn, typename ValueFn>
LaggedSeries emit_lagged(const std::vector<double>& x, const LagPath& lag_path,
                         double sigma_u, Rng& rng, ValidFn valid,
                         ValueFn value) {
  check_lag_path(lag_path, x.size());
  if (!(sigma_u >= 0.0) || !std::isfinite(sigma_u)) {
    throw ConfigError("sigma_u must be finite and non-negative");
  }

  const std::size_t n = x.size();
  std::size_t start_t = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    if (valid(t, lag_path.taus[t - 1])) {
      start_t = t;
      break;
    }
  }
  if (start_t == 0) {
    throw ConfigError("no time step has enough history for its lag");
  }

  LaggedSeries out;
  out.start_t = start_t;
  out.values.reserve(n - start_t + 1);
  for (std::size_t t = start_t; t <= n; ++t) {
    const int tau = lag_path.taus[t - 1];
    if (!valid(t, tau)) {
      throw ConfigError("lag " + std::to_string(tau) + " at t=" +
                        std::to_string(t) + " reaches before the series start");
    }
    double v = value(t, tau);
    if (sigma_u > 0.0) {
      v += sigma_u * rng.normal();
    }
    out.values.push_back(v);
  }
  return out;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kF1: return "f1";
    case Family::kF2: return "f2";
    case Family::kF3: return "f3";
    case Family::kF4: return "f4";
    case Family::kF5: return "f5";
  }
  throw ArgumentError("unknown family value");
}

Family family_from_string(std::string_view name) {
  if (name == "f1") return Family::kF1;
  if (name == "f2") return Family::kF2;
  if (name == "f3") return Family::kF3;
  if (name == "f4") return Family::kF4;
  if (name == "f5") return Family::kF5;
  throw ConfigError("unknown family '" + std::string(name) +
                    "' (expected f1..f5)");
}

void SimConfig::validate() const {
  if (!(std::abs(ar_coefficient) < 1.0)) {
    throw ConfigError("ar_coefficient must satisfy |a| < 1, got " +
                      std::to_string(ar_coefficient));
  }
  if (!(sigma_u >= 0.0) || !std::isfinite(sigma_u)) {
    throw ConfigError("sigma_u must be finite and non-negative");
  }
  if (length < kMinSimLength) {
    throw ConfigError("length must be at least " +
                      std::to_string(kMinSimLength) + ", got " +
                      std::to_string(length));
  }
  if ((family == Family::kF1 || family == Family::kF2) && length > 600) {
    throw ConfigError("step-lag families are defined for length <= 600, got " +
                      std::to_string(length));
  }
}

std::vector<double> gen_ar1(std::size_t length, double a, Rng& rng) {
  if (!(std::abs(a) < 1.0)) {
    throw ConfigError("AR coefficient must satisfy |a| < 1, got " +
                      std::to_string(a));
  }
  if (length == 0) {
    throw ConfigError("series length must be positive");
  }
  std::vector<double> x(length);
  x[0] = rng.normal();
  for (std::size_t i = 1; i < length; ++i) {
    x[i] = a * x[i - 1] + rng.normal();
  }
  return x;
}

std::vector<double> gen_ar1(std::size_t length, double a, std::uint64_t seed) {
  Rng rng(seed);
  return gen_ar1(length, a, rng);
}

int tau_step(long t) {
  if (t < 1 || t > 600) {
    throw ArgumentError("step lag path is defined for t in [1,600], got " +
                        std::to_string(t));
  }
  if (t <= 200) return 5;
  if (t <= 400) return 20;
  return 10;
}

int tau_random_walk_step(int prev, Rng& rng) {
  if (prev < kWalkMin || prev > kWalkMax) {
    throw ArgumentError("walk lag out of range [5,25]: " +
                        std::to_string(prev));
  }
  const int lo = prev <= kWalkMin ? 0 : -1;
  const int hi = prev >= kWalkMax ? 0 : 1;
  return prev + rng.uniform_int(lo, hi);
}

LaggedSeries apply_lag_single(const std::vector<double>& x,
                              const LagPath& lag_path, double sigma_u,
                              Rng& rng) {
  return emit_lagged(
      x, lag_path, sigma_u, rng,
      [](std::size_t t, int tau) { return t > static_cast<std::size_t>(tau); },
      [&x](std::size_t t, int tau) {
        return x[t - static_cast<std::size_t>(tau) - 1];
      });
}

LaggedSeries apply_lag_averaged(const std::vector<double>& x,
                                const LagPath& lag_path, double sigma_u,
                                Rng& rng) {
  return emit_lagged(
      x, lag_path, sigma_u, rng,
      [](std::size_t t, int tau) {
        return tau >= 3 && t > static_cast<std::size_t>(tau) + 3;
      },
      [&x](std::size_t t, int tau) { return averaged_lag_value(x, t, tau); });
}

SimulatedPair make_pair(const SimConfig& config) {
  config.validate();
  Rng rng(config.seed);

  const std::size_t total = config.length + kWarmup;
  const std::vector<double> x_ext = gen_ar1(total, config.ar_coefficient, rng);

  std::vector<int> taus(config.length);
  switch (config.family) {
    case Family::kF1:
    case Family::kF2:
      for (std::size_t t = 1; t <= config.length; ++t) {
        taus[t - 1] = tau_step(static_cast<long>(t));
      }
      break;
    case Family::kF3:
    case Family::kF4:
      taus[0] = kWalkStart;
      for (std::size_t t = 2; t <= config.length; ++t) {
        taus[t - 1] = tau_random_walk_step(taus[t - 2], rng);
      }
      break;
    case Family::kF5:
      for (int& tau : taus) tau = kWalkMin;
      break;
  }

  const bool averaged =
      config.family == Family::kF2 || config.family == Family::kF4;

  SimulatedPair pair;
  pair.config = config;
  pair.lag_path.taus = taus;
  pair.x.assign(x_ext.begin() + static_cast<std::ptrdiff_t>(kWarmup),
                x_ext.end());
  pair.y.resize(config.length);
  for (std::size_t t = 1; t <= config.length; ++t) {
    const std::size_t ext_t = t + kWarmup;
    const int tau = taus[t - 1];
    double v = averaged ? averaged_lag_value(x_ext, ext_t, tau)
                        : x_ext[ext_t - static_cast<std::size_t>(tau) - 1];
    if (config.sigma_u > 0.0) {
      v += config.sigma_u * rng.normal();
    }
    pair.y[t - 1] = v;
  }
  return pair;
}

}  // namespace sdm
