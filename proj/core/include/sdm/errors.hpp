#pragma once

#include <stdexcept>
#include <string>

namespace sdm {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter value (bad state count, negative
/// diffusion, non-stationary AR coefficient, unknown model family, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Structural precondition violation: mismatched lengths or shapes,
/// values outside their documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Problems with input data: unreadable files, malformed CSV rows,
/// non-numeric cells, degenerate (zero-variance) series.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Every posterior product underflowed to zero before the probability
/// floor could be applied; the update step cannot renormalize.
class DegenerateUpdateError : public Error {
 public:
  explicit DegenerateUpdateError(const std::string& what, long step_index = -1)
      : Error(what), step_index_(step_index) {}

  /// Filter step at which the update degenerated, -1 if unknown.
  long step_index() const noexcept { return step_index_; }

 private:
  long step_index_;
};

}  // namespace sdm
