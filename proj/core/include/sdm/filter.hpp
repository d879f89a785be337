#pragma once

#include <cstddef>

#include "sdm/belief.hpp"
#include "sdm/measurement.hpp"

namespace sdm {

struct FilterOptions {
  std::size_t n_states = 30;
  double floor = kDefaultFloor;
  SweepMode sweep = SweepMode::kPseudocode;
};

/// Per-step byproducts of the recursion, in the order they were used:
/// theta and lambda are the parameter estimates that drove the step,
/// transition_error and weighted_residual are the new samples recorded
/// for the next step's estimates.
struct StepDiagnostics {
  double theta = 0.0;
  double lambda = 0.0;
  double transition_error = 0.0;
  double weighted_residual = 0.0;
  long step_index = 0;
};

/// Grid-based recursive Bayes filter over the lag states of a single
/// causality direction.
///
/// Each step runs the full recursion: estimate theta (median of past
/// transition errors) and lambda (reciprocal mean of past weighted
/// residuals), project the beliefs forward, score every lag with the
/// exponential likelihood of its squared distance, renormalize with the
/// probability floor, then record this step's transition error and
/// weighted residual. One instance processes one series pair
/// sequentially; independent instances are safe to run in parallel.
class LagFilter {
 public:
  explicit LagFilter(FilterOptions options);
  LagFilter(FilterOptions options, BeliefVector initial_beliefs);

  /// Advance the filter by one observation, given the per-lag squared
  /// distances for that time step.
  StepDiagnostics step(const DistanceVector& distances);

  const BeliefVector& beliefs() const noexcept { return beliefs_; }
  const DiffusionEstimator& diffusion() const noexcept { return diffusion_; }
  const RateEstimator& rate() const noexcept { return rate_; }
  long steps_processed() const noexcept { return step_index_; }
  std::size_t n_states() const noexcept { return options_.n_states; }
  const FilterOptions& options() const noexcept { return options_; }

 private:
  FilterOptions options_;
  BeliefVector beliefs_;
  DiffusionEstimator diffusion_;
  RateEstimator rate_;
  long step_index_ = 0;
};

/// Two-column variant of LagFilter for the bi-directional and
/// positive-negative causality structures. The forward projection is
/// applied to each column independently; the Bayes update normalizes
/// jointly over all 2*n entries with one shared rate parameter.
class MatrixLagFilter {
 public:
  explicit MatrixLagFilter(FilterOptions options);

  StepDiagnostics step(const DistanceMatrix& distances);

  const BeliefMatrix& beliefs() const noexcept { return beliefs_; }
  const DiffusionEstimator& diffusion() const noexcept { return diffusion_; }
  const RateEstimator& rate() const noexcept { return rate_; }
  long steps_processed() const noexcept { return step_index_; }
  std::size_t n_states() const noexcept { return options_.n_states; }

 private:
  FilterOptions options_;
  BeliefMatrix beliefs_;
  DiffusionEstimator diffusion_;
  RateEstimator rate_;
  long step_index_ = 0;
};

}  // namespace sdm
