#include "sdm/belief.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdm/errors.hpp"

namespace sdm {

namespace {

void push_heap_lower(std::vector<double>& h, double v) {
  h.push_back(v);
  std::push_heap(h.begin(), h.end());  // max-heap
}

void push_heap_upper(std::vector<double>& h, double v) {
  h.push_back(v);
  std::push_heap(h.begin(), h.end(), std::greater<>{});  // min-heap
}

double pop_heap_lower(std::vector<double>& h) {
  std::pop_heap(h.begin(), h.end());
  double v = h.back();
  h.pop_back();
  return v;
}

double pop_heap_upper(std::vector<double>& h) {
  std::pop_heap(h.begin(), h.end(), std::greater<>{});
  double v = h.back();
  h.pop_back();
  return v;
}

}  // namespace

BeliefVector BeliefVector::uniform(std::size_t n_states) {
  if (n_states < 2) {
    throw ConfigError("belief vector needs at least 2 lag states, got " +
                      std::to_string(n_states));
  }
  return BeliefVector(
      std::vector<double>(n_states, 1.0 / static_cast<double>(n_states)));
}

BeliefVector BeliefVector::from_weights(std::vector<double> weights) {
  if (weights.size() < 2) {
    throw ConfigError("belief vector needs at least 2 lag states, got " +
                      std::to_string(weights.size()));
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ArgumentError("belief weights must be finite and non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ArgumentError("belief weights must sum to 1, got " +
                        std::to_string(sum));
  }
  return BeliefVector(std::move(weights));
}

double BeliefVector::sum() const noexcept {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

std::size_t BeliefVector::argmax_lag() const noexcept {
  return static_cast<std::size_t>(
             std::max_element(weights_.begin(), weights_.end()) -
             weights_.begin()) +
         1;
}

std::vector<double> predict_raw(std::span<const double> prior, double theta,
                                SweepMode mode) {
  if (theta < 0.0 || !std::isfinite(theta)) {
    throw ConfigError("diffusion parameter theta must be non-negative, got " +
                      std::to_string(theta));
  }
  const std::size_t n = prior.size();
  const double third = theta / 3.0;
  std::vector<double> p(prior.begin(), prior.end());
  if (mode == SweepMode::kPseudocode) {
    // Reversed in-place sweep: slots above i already hold the projection,
    // slots at and below i still hold the prior.
    for (std::size_t i = n; i >= 1; --i) {
      const double left = (i >= 2) ? p[i - 2] : 0.0;
      const double mid = p[i - 1];
      const double right = (i < n) ? p[i] : 0.0;
      p[i - 1] = mid + third * (left + mid + right);
    }
  } else {
    for (std::size_t i = n; i >= 1; --i) {
      const double left = (i >= 2) ? prior[i - 2] : 0.0;
      const double mid = prior[i - 1];
      const double right = (i < n) ? prior[i] : 0.0;
      p[i - 1] = mid + third * (left + mid + right);
    }
  }
  return p;
}

PredictedWeights predict(const BeliefVector& prior, double theta,
                         SweepMode mode) {
  return PredictedWeights{predict_raw(prior.span(), theta, mode)};
}

std::vector<double> normalize_floor_renormalize(std::vector<double> products,
                                                double floor) {
  double sum = 0.0;
  for (double v : products) sum += v;
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw DegenerateUpdateError(
        "all posterior products underflowed to zero before flooring");
  }
  for (double& v : products) v /= sum;
  double floored = 0.0;
  for (double& v : products) {
    if (v < floor) v = floor;
    floored += v;
  }
  for (double& v : products) v /= floored;
  // Renormalization can push entries that sat exactly at the floor a few
  // ulps below it; clamp them back. The sum moves by at most n*floor^2.
  for (double& v : products) {
    if (v < floor) v = floor;
  }
  return products;
}

BeliefVector update(const PredictedWeights& predicted,
                    std::span<const double> likelihoods, double floor) {
  const std::size_t n = predicted.values.size();
  if (likelihoods.size() != n) {
    throw ArgumentError("update: " + std::to_string(n) +
                        " predicted weights vs " +
                        std::to_string(likelihoods.size()) + " likelihoods");
  }
  std::vector<double> products(n);
  for (std::size_t i = 0; i < n; ++i) {
    products[i] = predicted.values[i] * likelihoods[i];
  }
  return BeliefVector(normalize_floor_renormalize(std::move(products), floor));
}

double transition_error(std::span<const double> prev,
                        std::span<const double> curr) {
  if (prev.size() != curr.size()) {
    throw ArgumentError("transition_error: length mismatch (" +
                        std::to_string(prev.size()) + " vs " +
                        std::to_string(curr.size()) + ")");
  }
  double v = 0.0;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    v += std::abs(curr[i] - prev[i]);
  }
  return v;
}

void DiffusionEstimator::observe(double v) {
  if (!std::isfinite(v) || v < -1e-9 || v > 2.0 + 1e-9) {
    throw ArgumentError("transition error outside [0, 2]: " +
                        std::to_string(v));
  }
  v = std::clamp(v, 0.0, 2.0);
  history_.push_back(v);
  if (lower_.empty() || v <= lower_.front()) {
    push_heap_lower(lower_, v);
  } else {
    push_heap_upper(upper_, v);
  }
  if (lower_.size() > upper_.size() + 1) {
    push_heap_upper(upper_, pop_heap_lower(lower_));
  } else if (upper_.size() > lower_.size() + 1) {
    push_heap_lower(lower_, pop_heap_upper(upper_));
  }
}

double DiffusionEstimator::theta() const {
  if (history_.empty()) return 0.0;  // cold start: no evidence of variation
  double med;
  if (lower_.size() > upper_.size()) {
    med = lower_.front();
  } else if (upper_.size() > lower_.size()) {
    med = upper_.front();
  } else {
    med = (lower_.front() + upper_.front()) / 2.0;
  }
  return std::clamp(med, 0.0, 2.0);
}

void RateEstimator::observe(double squared_residual) {
  if (!std::isfinite(squared_residual) || squared_residual < 0.0) {
    throw ArgumentError("squared residual must be finite and non-negative");
  }
  residual_sum_ += squared_residual;
  ++count_;
}

double RateEstimator::lambda() const noexcept {
  if (count_ == 0 || residual_sum_ <= 0.0) return 1.0;
  return static_cast<double>(count_) / residual_sum_;
}

}  // namespace sdm
