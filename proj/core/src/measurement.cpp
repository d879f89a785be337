#include "sdm/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdm/errors.hpp"

namespace sdm {

LagWindow LagWindow::at(std::span<const double> series, std::size_t t,
                        std::size_t n_states) {
  if (t < n_states + 1) {
    throw ArgumentError("lag window at t=" + std::to_string(t) +
                        " needs t >= " + std::to_string(n_states + 1));
  }
  if (t - 1 > series.size()) {
    throw ArgumentError("lag window at t=" + std::to_string(t) +
                        " reaches past the series end (length " +
                        std::to_string(series.size()) + ")");
  }
  LagWindow w;
  w.values.resize(n_states);
  for (std::size_t i = 1; i <= n_states; ++i) {
    w.values[i - 1] = series[t - i - 1];
  }
  return w;
}

DistanceVector distances_uni(const LagWindow& window, double y_now) {
  DistanceVector d(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double r = y_now - window.values[i];
    d[i] = r * r;
  }
  return d;
}

double likelihood(double distance, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("exponential rate lambda must be positive, got " +
                      std::to_string(lambda));
  }
  return lambda * std::exp(-lambda * distance);
}

double weighted_residual(std::span<const double> weights,
                         std::span<const double> distances) {
  if (weights.size() != distances.size()) {
    throw ArgumentError("weighted_residual: length mismatch (" +
                        std::to_string(weights.size()) + " vs " +
                        std::to_string(distances.size()) + ")");
  }
  double u2 = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    u2 += weights[i] * distances[i];
  }
  return u2;
}

DistanceMatrix distances_bidirectional(const LagWindow& x_window,
                                       const LagWindow& y_window, double x_now,
                                       double y_now) {
  if (x_window.size() != y_window.size()) {
    throw ArgumentError("bidirectional windows must have equal length");
  }
  return DistanceMatrix{distances_uni(x_window, y_now),
                        distances_uni(y_window, x_now)};
}

DistanceMatrix distances_posneg(const LagWindow& window, double y_now) {
  DistanceMatrix d;
  d.col1.resize(window.size());
  d.col2.resize(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double pos = y_now - window.values[i];
    const double neg = y_now + window.values[i];
    d.col1[i] = pos * pos;
    d.col2[i] = neg * neg;
  }
  return d;
}

BeliefMatrix BeliefMatrix::uniform(std::size_t n_states) {
  if (n_states < 2) {
    throw ConfigError("belief matrix needs at least 2 lag states, got " +
                      std::to_string(n_states));
  }
  const double w = 1.0 / static_cast<double>(2 * n_states);
  return BeliefMatrix(std::vector<double>(n_states, w),
                      std::vector<double>(n_states, w));
}

BeliefMatrix BeliefMatrix::from_columns(std::vector<double> col1,
                                        std::vector<double> col2) {
  if (col1.size() != col2.size() || col1.empty()) {
    throw ArgumentError("belief matrix columns must be non-empty and equal");
  }
  double sum = 0.0;
  for (double w : col1) sum += w;
  for (double w : col2) sum += w;
  for (const auto* col : {&col1, &col2}) {
    for (double w : *col) {
      if (!std::isfinite(w) || w < 0.0) {
        throw ArgumentError("belief weights must be finite and non-negative");
      }
    }
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ArgumentError("belief matrix must sum to 1 jointly, got " +
                        std::to_string(sum));
  }
  return BeliefMatrix(std::move(col1), std::move(col2));
}

double BeliefMatrix::col1_mass() const noexcept {
  double s = 0.0;
  for (double w : col1_) s += w;
  return s;
}

double BeliefMatrix::col2_mass() const noexcept {
  double s = 0.0;
  for (double w : col2_) s += w;
  return s;
}

std::size_t BeliefMatrix::argmax_lag(int column) const {
  if (column != 1 && column != 2) {
    throw ArgumentError("belief matrix column index must be 1 or 2");
  }
  const auto& col = (column == 1) ? col1_ : col2_;
  return static_cast<std::size_t>(std::max_element(col.begin(), col.end()) -
                                  col.begin()) +
         1;
}

BeliefMatrix update_matrix(const PredictedWeights& predicted_col1,
                           const PredictedWeights& predicted_col2,
                           const DistanceMatrix& distances, double lambda,
                           double floor) {
  const std::size_t n = distances.n_states();
  if (predicted_col1.values.size() != n || predicted_col2.values.size() != n ||
      distances.col2.size() != n) {
    throw ArgumentError("update_matrix: column shape mismatch");
  }
  // Flatten column-major so both columns share one joint normalizer.
  std::vector<double> products(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    products[i] = predicted_col1.values[i] * likelihood(distances.col1[i], lambda);
    products[n + i] =
        predicted_col2.values[i] * likelihood(distances.col2[i], lambda);
  }
  products = normalize_floor_renormalize(std::move(products), floor);
  std::vector<double> c1(products.begin(), products.begin() + n);
  std::vector<double> c2(products.begin() + n, products.end());
  return BeliefMatrix(std::move(c1), std::move(c2));
}

double joint_rate_residual(const BeliefMatrix& weights,
                           const DistanceMatrix& distances) {
  if (weights.n_states() != distances.n_states() ||
      distances.col2.size() != distances.col1.size()) {
    throw ArgumentError("joint_rate_residual: shape mismatch");
  }
  return weighted_residual(weights.col1(), distances.col1) +
         weighted_residual(weights.col2(), distances.col2);
}

double forecast_uni(const BeliefVector& weights, const LagWindow& window) {
  if (weights.size() != window.size()) {
    throw ArgumentError("forecast_uni: " + std::to_string(weights.size()) +
                        " weights vs window of " +
                        std::to_string(window.size()));
  }
  double y_hat = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    y_hat += weights[i] * window.values[i];
  }
  return y_hat;
}

double forecast_posneg(const BeliefMatrix& weights, const LagWindow& window) {
  if (weights.n_states() != window.size()) {
    throw ArgumentError("forecast_posneg: weight/window length mismatch");
  }
  double y_hat = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    y_hat += weights.col1()[i] * window.values[i];
    y_hat -= weights.col2()[i] * window.values[i];
  }
  return y_hat;
}

DirectionalForecast forecast_bidirectional(const BeliefMatrix& weights,
                                           const LagWindow& x_window,
                                           const LagWindow& y_window,
                                           double floor) {
  const std::size_t n = weights.n_states();
  if (x_window.size() != n || y_window.size() != n) {
    throw ArgumentError("forecast_bidirectional: window length mismatch");
  }
  DirectionalForecast f;
  f.x_leads_mass = weights.col1_mass();
  f.y_leads_mass = weights.col2_mass();
  const double undefined_below = 2.0 * static_cast<double>(n) * floor;
  if (f.x_leads_mass > undefined_below) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += weights.col1()[i] * x_window.values[i];
    }
    f.y_hat = acc / f.x_leads_mass;
    f.y_hat_defined = true;
  } else {
    f.y_hat = std::numeric_limits<double>::quiet_NaN();
  }
  if (f.y_leads_mass > undefined_below) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += weights.col2()[i] * y_window.values[i];
    }
    f.x_hat = acc / f.y_leads_mass;
    f.x_hat_defined = true;
  } else {
    f.x_hat = std::numeric_limits<double>::quiet_NaN();
  }
  return f;
}

}  // namespace sdm
