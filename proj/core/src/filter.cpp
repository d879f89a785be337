#include "sdm/filter.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "sdm/errors.hpp"

namespace sdm {

namespace {

void validate_options(const FilterOptions& options) {
  if (options.n_states < 2) {
    throw ConfigError("filter needs at least 2 lag states, got " +
                      std::to_string(options.n_states));
  }
  if (!(options.floor > 0.0) || options.floor >= 1e-3) {
    throw ConfigError("probability floor must be in (0, 1e-3), got " +
                      std::to_string(options.floor));
  }
}

void validate_distances(std::span<const double> d, long step_index) {
  for (double v : d) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ArgumentError("step " + std::to_string(step_index) +
                          ": distances must be finite and non-negative");
    }
  }
}

BeliefVector uniform_start(const FilterOptions& options) {
  validate_options(options);
  return BeliefVector::uniform(options.n_states);
}

BeliefMatrix uniform_matrix_start(const FilterOptions& options) {
  validate_options(options);
  return BeliefMatrix::uniform(options.n_states);
}

}  // namespace

LagFilter::LagFilter(FilterOptions options)
    : options_(options), beliefs_(uniform_start(options)) {}

LagFilter::LagFilter(FilterOptions options, BeliefVector initial_beliefs)
    : options_(options), beliefs_(std::move(initial_beliefs)) {
  validate_options(options);
  if (beliefs_.size() != options_.n_states) {
    throw ArgumentError("initial beliefs have " +
                        std::to_string(beliefs_.size()) + " states, options say " +
                        std::to_string(options_.n_states));
  }
}

StepDiagnostics LagFilter::step(const DistanceVector& distances) {
  const long index = step_index_ + 1;
  if (distances.size() != options_.n_states) {
    throw ArgumentError("step " + std::to_string(index) + ": expected " +
                        std::to_string(options_.n_states) + " distances, got " +
                        std::to_string(distances.size()));
  }
  validate_distances(distances, index);

  StepDiagnostics diag;
  diag.step_index = index;
  diag.theta = diffusion_.theta();
  diag.lambda = rate_.lambda();

  const PredictedWeights predicted =
      predict(beliefs_, diag.theta, options_.sweep);
  std::vector<double> likelihoods(options_.n_states);
  for (std::size_t i = 0; i < options_.n_states; ++i) {
    likelihoods[i] = likelihood(distances[i], diag.lambda);
  }

  BeliefVector posterior = [&] {
    try {
      return update(predicted, likelihoods, options_.floor);
    } catch (const DegenerateUpdateError& e) {
      throw DegenerateUpdateError(
          "step " + std::to_string(index) + ": " + e.what(), index);
    }
  }();

  diag.transition_error = transition_error(beliefs_.span(), posterior.span());
  // Residuals are weighted by the pre-update beliefs: a genuine
  // out-of-sample error sample for the rate estimate.
  diag.weighted_residual = weighted_residual(beliefs_.span(), distances);

  diffusion_.observe(diag.transition_error);
  rate_.observe(diag.weighted_residual);
  beliefs_ = std::move(posterior);
  step_index_ = index;
  return diag;
}

MatrixLagFilter::MatrixLagFilter(FilterOptions options)
    : options_(options), beliefs_(uniform_matrix_start(options)) {}

StepDiagnostics MatrixLagFilter::step(const DistanceMatrix& distances) {
  const long index = step_index_ + 1;
  if (distances.col1.size() != options_.n_states ||
      distances.col2.size() != options_.n_states) {
    throw ArgumentError("step " + std::to_string(index) +
                        ": distance matrix shape mismatch");
  }
  validate_distances(distances.col1, index);
  validate_distances(distances.col2, index);

  StepDiagnostics diag;
  diag.step_index = index;
  diag.theta = diffusion_.theta();
  diag.lambda = rate_.lambda();

  const PredictedWeights p1{
      predict_raw(beliefs_.col1(), diag.theta, options_.sweep)};
  const PredictedWeights p2{
      predict_raw(beliefs_.col2(), diag.theta, options_.sweep)};

  BeliefMatrix posterior = [&] {
    try {
      return update_matrix(p1, p2, distances, diag.lambda, options_.floor);
    } catch (const DegenerateUpdateError& e) {
      throw DegenerateUpdateError(
          "step " + std::to_string(index) + ": " + e.what(), index);
    }
  }();

  diag.transition_error =
      transition_error(beliefs_.col1(), posterior.col1()) +
      transition_error(beliefs_.col2(), posterior.col2());
  diag.weighted_residual = joint_rate_residual(beliefs_, distances);

  diffusion_.observe(diag.transition_error);
  rate_.observe(diag.weighted_residual);
  beliefs_ = std::move(posterior);
  step_index_ = index;
  return diag;
}

}  // namespace sdm
