#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sdm/belief.hpp"

namespace sdm {

/// Per-lag squared distances; distances[i-1] compares the current value of
/// the lagging series with the leading series i steps back.
using DistanceVector = std::vector<double>;

/// The n most recent values of a leading series, ordered by lag:
/// values[i-1] holds the observation i steps before now.
struct LagWindow {
  std::vector<double> values;

  /// Window of `n_states` lags ending just before (1-based) time t, taken
  /// from a series whose k-th element is the value at time k+1. Requires
  /// t >= n_states + 1 so the window is fully populated.
  static LagWindow at(std::span<const double> series, std::size_t t,
                      std::size_t n_states);

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
};

/// Two-column distance structure for the bi-directional and
/// positive-negative variants. Column meaning depends on the variant:
/// bi-directional: col1 = x-leads, col2 = y-leads;
/// positive-negative: col1 = positive sign, col2 = negative sign.
struct DistanceMatrix {
  DistanceVector col1;
  DistanceVector col2;

  std::size_t n_states() const noexcept { return col1.size(); }
};

/// Probability weights over a two-column lag grid, normalized jointly: the
/// sum over all 2*n entries is 1.
class BeliefMatrix {
 public:
  static BeliefMatrix uniform(std::size_t n_states);
  static BeliefMatrix from_columns(std::vector<double> col1,
                                   std::vector<double> col2);

  const std::vector<double>& col1() const noexcept { return col1_; }
  const std::vector<double>& col2() const noexcept { return col2_; }
  std::size_t n_states() const noexcept { return col1_.size(); }
  double col1_mass() const noexcept;
  double col2_mass() const noexcept;

  /// 1-based lag with the largest weight in the given column (1 or 2).
  std::size_t argmax_lag(int column) const;

 private:
  BeliefMatrix(std::vector<double> c1, std::vector<double> c2)
      : col1_(std::move(c1)), col2_(std::move(c2)) {}
  friend BeliefMatrix update_matrix(const PredictedWeights&,
                                    const PredictedWeights&,
                                    const DistanceMatrix&, double, double);

  std::vector<double> col1_;
  std::vector<double> col2_;
};

/// Squared distances (y_now - x_{t-i})^2 for every lag in the window.
DistanceVector distances_uni(const LagWindow& window, double y_now);

/// Exponential likelihood lambda * exp(-lambda * distance); strictly
/// decreasing in the distance. lambda must be positive.
double likelihood(double distance, double lambda);

/// Weighted squared residual u^2 = sum_i weights[i] * distances[i].
double weighted_residual(std::span<const double> weights,
                         std::span<const double> distances);

/// Column 1: (y_now - x_{t-i})^2, column 2: (x_now - y_{t-i})^2, so the two
/// causality directions compete for the same probability mass.
DistanceMatrix distances_bidirectional(const LagWindow& x_window,
                                       const LagWindow& y_window, double x_now,
                                       double y_now);

/// Column 1: (y_now - x_{t-i})^2, column 2: (y_now + x_{t-i})^2, so
/// positively and negatively correlated regimes compete.
DistanceMatrix distances_posneg(const LagWindow& window, double y_now);

/// Matrix Bayes update: per-entry exponential likelihood times predicted
/// weight, normalized jointly over all 2*n entries, floored, renormalized.
BeliefMatrix update_matrix(const PredictedWeights& predicted_col1,
                           const PredictedWeights& predicted_col2,
                           const DistanceMatrix& distances, double lambda,
                           double floor = kDefaultFloor);

/// Joint residual sample W . D = sum over all entries of weight * distance;
/// feeds the shared rate estimate for the matrix variants.
double joint_rate_residual(const BeliefMatrix& weights,
                           const DistanceMatrix& distances);

/// One-step-ahead forecast: posterior weights dotted with the lag window.
double forecast_uni(const BeliefVector& weights, const LagWindow& window);

/// Positive-negative forecast (extension; no rule is prescribed for this
/// variant): the positive column contributes +x, the negative column -x.
double forecast_posneg(const BeliefMatrix& weights, const LagWindow& window);

struct DirectionalForecast {
  double y_hat = 0.0;
  double x_hat = 0.0;
  bool y_hat_defined = false;
  bool x_hat_defined = false;
  /// Raw per-column probability mass, a directional-strength diagnostic.
  double x_leads_mass = 0.0;
  double y_leads_mass = 0.0;
};

/// Bi-directional forecast (extension): each column is renormalized to sum
/// 1 and dotted with its window. A column whose raw mass has collapsed to
/// floor level (<= 2 * n * floor) is flagged undefined.
DirectionalForecast forecast_bidirectional(const BeliefMatrix& weights,
                                           const LagWindow& x_window,
                                           const LagWindow& y_window,
                                           double floor = kDefaultFloor);

}  // namespace sdm
