#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sdm {

/// Lower limit applied to every posterior weight so that no lag is ever
/// driven to exactly zero probability and the filter stays path-independent.
inline constexpr double kDefaultFloor = 1e-12;

/// How the forward projection reads its upper neighbour.
///
/// kPseudocode sweeps the buffer in place from the last lag down to the
/// first, so the i+1 term is the freshly projected value. kFreshBuffer
/// reads the i+1 term from the prior instead; kept as an alternative for
/// sensitivity analysis.
enum class SweepMode { kPseudocode, kFreshBuffer };

class BeliefVector;

/// Unnormalized relative-likelihood weights produced by the prediction
/// step. Not probabilities until the update step renormalizes them.
struct PredictedWeights {
  std::vector<double> values;
};

/// Probability weights over the lag grid 1..n_states. weights()[i-1] is the
/// probability that lag i currently carries the relationship. Normalized to
/// sum 1; after an update step every entry is at least the floor.
class BeliefVector {
 public:
  /// Uniform prior 1/n over every lag. n_states must be at least 2.
  static BeliefVector uniform(std::size_t n_states);

  /// Adopts weights that already sum to 1 (within 1e-9); entries must be
  /// finite and non-negative. No renormalization is performed, so values
  /// pass through bit-exactly.
  static BeliefVector from_weights(std::vector<double> weights);

  const std::vector<double>& weights() const noexcept { return weights_; }
  std::span<const double> span() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const noexcept { return weights_[i]; }
  double sum() const noexcept;

  /// 1-based lag carrying the largest weight (first one on ties).
  std::size_t argmax_lag() const noexcept;

 private:
  explicit BeliefVector(std::vector<double> w) : weights_(std::move(w)) {}
  friend BeliefVector update(const PredictedWeights&, std::span<const double>,
                             double);

  std::vector<double> weights_;
};

/// Normalize, floor at `floor`, renormalize, then clamp once more so the
/// floor holds exactly (the final clamp perturbs the sum by at most
/// n*floor^2). Shared by the vector and matrix update paths. Throws
/// DegenerateUpdateError when the products sum to zero.
std::vector<double> normalize_floor_renormalize(std::vector<double> products,
                                                double floor);

/// Forward projection of a weight vector under diffusion magnitude theta.
///
/// Runs the reversed sweep i = n..1 with
///   p[i] = prior[i] + theta/3 * (prior[i-1] + prior[i] + p[i+1])
/// where out-of-range neighbours are zero. The result sums to at least
/// sum(prior), with equality exactly when theta is 0.
std::vector<double> predict_raw(std::span<const double> prior, double theta,
                                SweepMode mode = SweepMode::kPseudocode);

PredictedWeights predict(const BeliefVector& prior, double theta,
                         SweepMode mode = SweepMode::kPseudocode);

/// Bayes update: multiplies predicted weights by their likelihoods,
/// normalizes, floors every entry, renormalizes. Throws
/// DegenerateUpdateError if every product underflowed to zero.
BeliefVector update(const PredictedWeights& predicted,
                    std::span<const double> likelihoods,
                    double floor = kDefaultFloor);

/// L1 distance between two belief vectors; the per-step transition error
/// v_t = |w_t - w_{t-1}|, always in [0, 2].
double transition_error(std::span<const double> prev,
                        std::span<const double> curr);

/// Tracks the history of belief-transition errors and estimates the
/// diffusion magnitude theta as their exact median. Median extraction is
/// done with a two-heap running median; the insertion-order history is
/// kept for inspection.
class DiffusionEstimator {
 public:
  /// Record one transition error. Values must lie in [0, 2] up to
  /// rounding; they are clamped to that interval before storage.
  void observe(double v);

  /// Exact median of the observed errors (mean of the two central order
  /// statistics for even counts), clamped to [0, 2]. Zero when empty.
  double theta() const;

  std::size_t count() const noexcept { return history_.size(); }
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
  // max-heap of the lower half, min-heap of the upper half
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Running maximum-likelihood estimate of the exponential rate parameter:
/// lambda = 1 / mean(u^2) over the weighted squared residuals seen so far.
/// Before any residual arrives (or if all residuals were exactly zero)
/// the neutral rate 1.0 is returned.
class RateEstimator {
 public:
  void observe(double squared_residual);

  double lambda() const noexcept;

  double residual_sum() const noexcept { return residual_sum_; }
  std::size_t count() const noexcept { return count_; }

 private:
  double residual_sum_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace sdm
