#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sdm/rng.hpp"

namespace sdm {

/// Leading points generated before the emitted window so every lagged
/// reference (max lag 25, plus 3 for the averaging window) exists from
/// t = 1 and the AR(1) start transient has dissipated.
inline constexpr std::size_t kWarmup = 50;

inline constexpr int kWalkMin = 5;
inline constexpr int kWalkMax = 25;
inline constexpr int kWalkStart = 15;

/// 30 lag states plus the maximum lag of 25; simulated series must be
/// strictly longer to leave any scoreable steps.
inline constexpr std::size_t kMinSimLength = 56;

/// The five synthetic constructions. f1/f2 use the three-regime step
/// lag path, f3/f4 the bounded random walk, f5 a constant lag of 5.
/// Odd numbers lag a single point, even numbers a seven-term average.
enum class Family { kF1 = 1, kF2, kF3, kF4, kF5 };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

struct LagPath {
  std::vector<int> taus;
};

struct SimConfig {
  Family family = Family::kF1;
  std::size_t length = 600;
  double sigma_u = 0.0;
  double ar_coefficient = 0.9;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimulatedPair {
  std::vector<double> x;
  std::vector<double> y;
  LagPath lag_path;
  SimConfig config;
};

/// A lagged transform of x. Emission starts at the first time step
/// whose lagged references all exist; start_t is that step, 1-based on
/// x's time axis.
struct LaggedSeries {
  std::size_t start_t = 0;
  std::vector<double> values;
};

/// x_t = a * x_{t-1} + N(0,1), x_1 ~ N(0,1).
std::vector<double> gen_ar1(std::size_t length, double a, Rng& rng);
std::vector<double> gen_ar1(std::size_t length, double a, std::uint64_t seed);

/// Three-regime step lag: 5 on [1,200], 20 on [201,400], 10 on
/// [401,600]. Boundary points belong to the preceding regime so each
/// regime is exactly 200 steps.
int tau_step(long t);

/// One step of the lag random walk: +/-1 or hold, uniform over the
/// moves that keep the lag inside [5,25].
int tau_random_walk_step(int prev, Rng& rng);

/// y_t = x_{t-tau_t} + u_t with u_t ~ N(0, sigma_u^2).
LaggedSeries apply_lag_single(const std::vector<double>& x,
                              const LagPath& lag_path, double sigma_u,
                              Rng& rng);

/// y_t = sum over i in [-3,3] of (1/7) x_{t-tau_t+i}, plus noise. The
/// seven terms accumulate in ascending lag order with the 1/7 factor
/// applied per term, matching the inner-product order of the
/// forecasting side so a noise-free y is reproducible bit-exactly from
/// the true averaging weights.
LaggedSeries apply_lag_averaged(const std::vector<double>& x,
                                const LagPath& lag_path, double sigma_u,
                                Rng& rng);

/// Generate a full (x, y) pair for one family. All randomness comes
/// from one generator seeded with config.seed, drawn in a fixed order
/// (x noise, then lag-path moves, then measurement noise), so pairs are
/// bit-identical across runs and platforms.
SimulatedPair make_pair(const SimConfig& config);

}  // namespace sdm
