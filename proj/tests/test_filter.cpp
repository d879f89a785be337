#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdm/errors.hpp"
#include "sdm/filter.hpp"
#include "sdm/rng.hpp"

using namespace sdm;
using doctest::Approx;

TEST_CASE("filter options are validated up front") {
  CHECK_THROWS_AS(LagFilter(FilterOptions{.n_states = 1}), ConfigError);
  CHECK_THROWS_AS(LagFilter(FilterOptions{.floor = 0.0}), ConfigError);
  CHECK_THROWS_AS(LagFilter(FilterOptions{.floor = 1e-3}), ConfigError);
  CHECK_THROWS_AS(
      LagFilter(FilterOptions{.n_states = 3},
                BeliefVector::uniform(4)),
      ArgumentError);
}

TEST_CASE("a filter starts uniform with neutral parameters") {
  const LagFilter filter(FilterOptions{.n_states = 5});
  CHECK(filter.steps_processed() == 0);
  CHECK(filter.beliefs()[0] == Approx(0.2).epsilon(1e-15));
  CHECK(filter.diffusion().theta() == 0.0);
  CHECK(filter.rate().lambda() == 1.0);
}

TEST_CASE("equal distances leave a uniform belief untouched") {
  LagFilter filter(FilterOptions{.n_states = 3});
  const StepDiagnostics diag = filter.step({0.4, 0.4, 0.4});
  CHECK(diag.step_index == 1);
  CHECK(diag.theta == 0.0);
  CHECK(diag.lambda == 1.0);
  CHECK(diag.transition_error <= 1e-12);
  CHECK(diag.weighted_residual == Approx(0.4).epsilon(1e-12));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(filter.beliefs()[i] == Approx(1.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("a confirming observation barely moves a one-hot belief") {
  const FilterOptions options{.n_states = 4};
  LagFilter filter(options, BeliefVector::from_weights({1, 0, 0, 0}));
  const StepDiagnostics diag = filter.step({0.0, 100.0, 100.0, 100.0});
  CHECK(filter.beliefs().argmax_lag() == 1);
  // Movement comes only from flooring the dead lags.
  CHECK(diag.transition_error <= 2.0 * 4 * options.floor);
}

TEST_CASE("one cold-start step has a closed-form posterior") {
  LagFilter filter(FilterOptions{.n_states = 3});
  const double big = 20.0;
  const StepDiagnostics diag = filter.step({0.0, big, big});

  // theta = 0 and lambda = 1 on the first step, so the posterior is the
  // uniform prior times likelihoods exp(0), exp(-big), exp(-big).
  const double k = std::exp(-big);
  const double denom = 1.0 + 2.0 * k;
  CHECK(filter.beliefs()[0] == Approx(1.0 / denom).epsilon(1e-14));
  CHECK(filter.beliefs()[1] == Approx(k / denom).epsilon(1e-14));
  CHECK(filter.beliefs()[2] == Approx(k / denom).epsilon(1e-14));
  CHECK(filter.beliefs()[0] > 0.9);
  CHECK(filter.beliefs().argmax_lag() == 1);

  CHECK(diag.weighted_residual ==
        Approx((2.0 * big) / 3.0).epsilon(1e-12));
}

TEST_CASE("diagnostics report the estimates that drove the step") {
  LagFilter filter(FilterOptions{.n_states = 2});
  const StepDiagnostics first = filter.step({0.0, 2.0});
  CHECK(first.theta == 0.0);
  CHECK(first.lambda == 1.0);

  // The first step's residual uses the prior (uniform) weights:
  // u^2 = 0.5*0 + 0.5*2 = 1, so the second step runs at lambda = 1/1.
  CHECK(first.weighted_residual == Approx(1.0).epsilon(1e-12));
  const double k = std::exp(-2.0);
  const double expected_v = 2.0 * (1.0 / (1.0 + k) - 0.5);
  CHECK(first.transition_error == Approx(expected_v).epsilon(1e-12));

  const StepDiagnostics second = filter.step({1.0, 1.0});
  CHECK(second.theta == Approx(expected_v).epsilon(1e-12));
  CHECK(second.lambda == Approx(1.0).epsilon(1e-12));
  CHECK(second.step_index == 2);
  CHECK(filter.steps_processed() == 2);
}

TEST_CASE("step rejects malformed distance vectors") {
  LagFilter filter(FilterOptions{.n_states = 3});
  CHECK_THROWS_AS(filter.step({1.0, 2.0}), ArgumentError);
  CHECK_THROWS_AS(filter.step({1.0, -0.5, 2.0}), ArgumentError);
  CHECK_THROWS_AS(
      filter.step({1.0, std::numeric_limits<double>::quiet_NaN(), 2.0}),
      ArgumentError);
  CHECK(filter.steps_processed() == 0);
}

TEST_CASE("an underflowing update surfaces as degeneracy with its step") {
  LagFilter filter(FilterOptions{.n_states = 3});
  filter.step({0.1, 0.2, 0.3});
  try {
    filter.step({1e6, 1e6, 1e6});
    FAIL("expected a degenerate update");
  } catch (const DegenerateUpdateError& e) {
    CHECK(e.step_index() == 2);
    CHECK(std::string(e.what()).find("step 2") != std::string::npos);
  }
}

TEST_CASE("posteriors stay normalized and floored across random runs") {
  Rng rng(555);
  for (int run = 0; run < 100; ++run) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 38));
    LagFilter filter(FilterOptions{.n_states = n});
    for (int s = 0; s < 40; ++s) {
      DistanceVector d(n);
      for (double& v : d) {
        const double r = rng.normal();
        v = r * r;
      }
      filter.step(d);
      CHECK(std::abs(filter.beliefs().sum() - 1.0) <= 1e-9);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(filter.beliefs()[i] >= filter.options().floor);
      }
    }
  }
}

TEST_CASE("identical inputs give bit-identical filter states") {
  Rng rng(808);
  std::vector<DistanceVector> stream;
  for (int s = 0; s < 200; ++s) {
    DistanceVector d(10);
    for (double& v : d) {
      const double r = rng.normal();
      v = r * r;
    }
    stream.push_back(d);
  }
  LagFilter a(FilterOptions{.n_states = 10});
  LagFilter b(FilterOptions{.n_states = 10});
  for (const DistanceVector& d : stream) {
    a.step(d);
    b.step(d);
    REQUIRE(a.beliefs().weights() == b.beliefs().weights());
  }
  CHECK(a.diffusion().theta() == b.diffusion().theta());
  CHECK(a.rate().lambda() == b.rate().lambda());
}

TEST_CASE("matrix filter mirrors the vector recursion on two columns") {
  MatrixLagFilter filter(FilterOptions{.n_states = 3});
  const StepDiagnostics diag =
      filter.step(DistanceMatrix{{0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}});
  CHECK(diag.theta == 0.0);
  CHECK(diag.lambda == 1.0);
  CHECK(diag.transition_error == Approx(0.0).epsilon(1e-12));
  CHECK(diag.weighted_residual == Approx(0.2).epsilon(1e-12));
  CHECK(filter.beliefs().col1_mass() == Approx(0.5).epsilon(1e-12));

  // Joint normalization: a column with smaller distances takes mass from
  // the other column, keeping the 2n-entry total at 1.
  filter.step(DistanceMatrix{{0.0, 0.0, 0.0}, {5.0, 5.0, 5.0}});
  CHECK(filter.beliefs().col1_mass() > 0.9);
  CHECK(filter.beliefs().col1_mass() + filter.beliefs().col2_mass() ==
        Approx(1.0).epsilon(1e-9));
}

TEST_CASE("matrix degeneracy carries the step index too") {
  MatrixLagFilter filter(FilterOptions{.n_states = 2});
  try {
    filter.step(DistanceMatrix{{1e6, 1e6}, {1e6, 1e6}});
    FAIL("expected a degenerate update");
  } catch (const DegenerateUpdateError& e) {
    CHECK(e.step_index() == 1);
  }
}
