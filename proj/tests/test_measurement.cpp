#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sdm/errors.hpp"
#include "sdm/filter.hpp"
#include "sdm/measurement.hpp"
#include "sdm/rng.hpp"
#include "sdm/simulation.hpp"

using namespace sdm;
using doctest::Approx;

TEST_CASE("lag window reads the most recent values in lag order") {
  const std::vector<double> series = {10, 20, 30, 40, 50};
  const LagWindow w = LagWindow::at(series, 5, 3);
  CHECK(w.values == std::vector<double>{40, 30, 20});

  // The window may end at the last observed point to forecast the next one.
  const LagWindow next = LagWindow::at(series, 6, 3);
  CHECK(next.values == std::vector<double>{50, 40, 30});

  CHECK_THROWS_AS(LagWindow::at(series, 3, 3), ArgumentError);
  CHECK_THROWS_AS(LagWindow::at(series, 7, 3), ArgumentError);
}

TEST_CASE("distances are squared gaps between now and each lagged value") {
  CHECK(distances_uni(LagWindow{{1, 2, 3}}, 2.0) ==
        DistanceVector{1.0, 0.0, 1.0});
  CHECK(distances_uni(LagWindow{{0.7, 0.7, 0.7}}, 0.7) ==
        DistanceVector{0.0, 0.0, 0.0});

  const DistanceVector d = distances_uni(LagWindow{{0.5, -0.5}}, 1.5);
  CHECK(d[0] == Approx(1.0).epsilon(1e-15));
  CHECK(d[1] == Approx(4.0).epsilon(1e-15));
}

TEST_CASE("likelihood is the exponential density at the distance") {
  CHECK(likelihood(0.0, 2.0) == 2.0);
  CHECK(likelihood(std::log(2.0), 1.0) == Approx(0.5).epsilon(1e-14));

  // Cross-check against a base-2 exponential.
  const double expected = 0.5 * std::exp2(-1.5 * std::numbers::log2e);
  CHECK(likelihood(3.0, 0.5) == Approx(expected).epsilon(1e-12));
  CHECK(likelihood(3.0, 0.5) == Approx(0.11157).epsilon(1e-4));

  CHECK_THROWS_AS(likelihood(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(likelihood(1.0, -2.0), ConfigError);
}

TEST_CASE("likelihood strictly decreases in distance") {
  Rng rng(303);
  for (int rep = 0; rep < 1000; ++rep) {
    const double lambda = 5.0 * rng.uniform01();
    double d1 = 10.0 * rng.uniform01();
    double d2 = 10.0 * rng.uniform01();
    if (d1 == d2) continue;
    if (d1 > d2) std::swap(d1, d2);
    CHECK(likelihood(d1, lambda) > likelihood(d2, lambda));
  }
}

TEST_CASE("weighted residual is the scalar product of weights and distances") {
  CHECK(weighted_residual(std::vector<double>{0, 1, 0},
                          std::vector<double>{5, 7, 9}) == 7.0);
  CHECK(weighted_residual(std::vector<double>{0.3, 0.2, 0.5},
                          std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(weighted_residual(std::vector<double>{0.5, 0.5},
                          std::vector<double>{2, 4}) ==
        Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(weighted_residual(std::vector<double>{0.5, 0.5},
                                    std::vector<double>{1.0}),
                  ArgumentError);
}

TEST_CASE("weighted residual matches a term-by-term oracle") {
  Rng rng(99);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 28));
    LagWindow window;
    std::vector<double> w(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      window.values.push_back(4.0 * rng.uniform01() - 2.0);
      w[i] = rng.uniform01();
      wsum += w[i];
    }
    for (double& v : w) v /= wsum;
    const double y_now = 4.0 * rng.uniform01() - 2.0;

    double oracle = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      oracle += w[i] * (y_now - window.values[i]) * (y_now - window.values[i]);
    }
    CHECK(weighted_residual(w, distances_uni(window, y_now)) ==
          Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("bidirectional distances pit the two causality directions") {
  const LagWindow constant{{2, 2, 2}};
  const DistanceMatrix zero =
      distances_bidirectional(constant, constant, 2.0, 2.0);
  CHECK(zero.col1 == DistanceVector{0, 0, 0});
  CHECK(zero.col2 == DistanceVector{0, 0, 0});

  const DistanceMatrix d =
      distances_bidirectional(LagWindow{{1, 2}}, LagWindow{{4, 5}}, 3.0, 6.0);
  CHECK(d.col1 == DistanceVector{25, 16});
  CHECK(d.col2 == DistanceVector{1, 4});

  CHECK_THROWS_AS(
      distances_bidirectional(LagWindow{{1, 2}}, LagWindow{{1}}, 0.0, 0.0),
      ArgumentError);
}

TEST_CASE("an exact lag match zeroes the matching bidirectional entry") {
  const std::vector<double> x = gen_ar1(40, 0.9, 5);
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t t = 4; t <= x.size(); ++t) y[t - 1] = x[t - 4];

  for (std::size_t t = 9; t <= x.size(); ++t) {
    const LagWindow xw = LagWindow::at(x, t, 8);
    const LagWindow yw = LagWindow::at(y, t, 8);
    const DistanceMatrix d =
        distances_bidirectional(xw, yw, x[t - 1], y[t - 1]);
    CHECK(d.col1[2] == 0.0);  // y_t == x_{t-3}
  }
}

TEST_CASE("sign-regime distances square the gap to +x and -x") {
  const DistanceMatrix one = distances_posneg(LagWindow{{1}}, 1.0);
  CHECK(one.col1 == DistanceVector{0});
  CHECK(one.col2 == DistanceVector{4});

  const DistanceMatrix d = distances_posneg(LagWindow{{-2, 3}}, 2.0);
  CHECK(d.col1 == DistanceVector{16, 1});
  CHECK(d.col2 == DistanceVector{0, 25});
}

TEST_CASE("sign-regime distances are symmetric when now is zero") {
  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    LagWindow window;
    for (int i = 0; i < 12; ++i) {
      window.values.push_back(6.0 * rng.uniform01() - 3.0);
    }
    const DistanceMatrix d = distances_posneg(window, 0.0);
    CHECK(d.col1 == d.col2);
  }
}

TEST_CASE("matrix update normalizes jointly over both columns") {
  SUBCASE("symmetric inputs split the mass evenly") {
    const PredictedWeights p{{0.4, 0.6}};
    const DistanceMatrix d{{0.3, 0.1}, {0.3, 0.1}};
    const BeliefMatrix post = update_matrix(p, p, d, 1.5);
    CHECK(post.col1() == post.col2());
    CHECK(post.col1_mass() == Approx(0.5).epsilon(1e-12));
    CHECK(post.col2_mass() == Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("a distant column keeps exactly the closed-form remainder") {
    const PredictedWeights p{{0.5, 0.5}};
    const DistanceMatrix d{{0.0, 0.0}, {10.0, 10.0}};
    const BeliefMatrix post = update_matrix(p, p, d, 1.0);
    const double k = std::exp(-10.0);
    CHECK(post.col1()[0] == Approx(0.5 / (1.0 + k)).epsilon(1e-14));
    CHECK(post.col2()[0] == Approx(0.5 * k / (1.0 + k)).epsilon(1e-14));
    CHECK(post.col2_mass() == Approx(k / (1.0 + k)).epsilon(1e-13));
  }
  SUBCASE("a hopeless column collapses onto the floor") {
    const PredictedWeights p{{0.5, 0.5}};
    const DistanceMatrix d{{0.0, 0.0}, {60.0, 60.0}};
    const BeliefMatrix post = update_matrix(p, p, d, 1.0, 1e-12);
    CHECK(post.col2()[0] == 1e-12);
    CHECK(post.col2()[1] == 1e-12);
    CHECK(post.col2_mass() == 2e-12);
    CHECK(post.col1_mass() == Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("single-state columns reduce to a two-entry normalization") {
    // lambda = 3 makes the likelihoods (3, 1) for d = (0, ln(3)/3).
    const BeliefMatrix post =
        update_matrix(PredictedWeights{{1.0}}, PredictedWeights{{1.0}},
                      DistanceMatrix{{0.0}, {std::log(3.0) / 3.0}}, 3.0);
    CHECK(post.col1()[0] == Approx(0.75).epsilon(1e-12));
    CHECK(post.col2()[0] == Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("shape mismatches are rejected") {
    CHECK_THROWS_AS(update_matrix(PredictedWeights{{1.0}},
                                  PredictedWeights{{1.0, 1.0}},
                                  DistanceMatrix{{0.0}, {0.0}}, 1.0),
                    ArgumentError);
  }
}

TEST_CASE("joint residual sums weight times distance over both columns") {
  const BeliefMatrix one_hot = BeliefMatrix::from_columns({1, 0}, {0, 0});
  CHECK(joint_rate_residual(one_hot, DistanceMatrix{{6, 3}, {9, 2}}) == 6.0);

  const BeliefMatrix quarter =
      BeliefMatrix::from_columns({0.25, 0.25}, {0.25, 0.25});
  CHECK(joint_rate_residual(quarter, DistanceMatrix{{1, 3}, {2, 4}}) ==
        Approx(2.5).epsilon(1e-15));
  CHECK(joint_rate_residual(quarter, DistanceMatrix{{0, 0}, {0, 0}}) == 0.0);

  CHECK_THROWS_AS(joint_rate_residual(quarter, DistanceMatrix{{1}, {2}}),
                  ArgumentError);
}

TEST_CASE("forecast is the belief-weighted sum of the lag window") {
  CHECK(forecast_uni(BeliefVector::from_weights({0, 1, 0}),
                     LagWindow{{7, 9, 11}}) == 9.0);
  CHECK(forecast_uni(BeliefVector::uniform(4), LagWindow{{2.5, 2.5, 2.5, 2.5}}) ==
        Approx(2.5).epsilon(1e-15));
  CHECK(forecast_uni(BeliefVector::from_weights({0.5, 0.5}),
                     LagWindow{{1, 3}}) == Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(
      forecast_uni(BeliefVector::uniform(3), LagWindow{{1, 2}}),
      ArgumentError);
}

TEST_CASE("one-hot beliefs reduce the forecast to an exact lag lookup") {
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 28));
    LagWindow window;
    for (std::size_t i = 0; i < n; ++i) {
      window.values.push_back(10.0 * rng.uniform01() - 5.0);
    }
    const std::size_t lag = static_cast<std::size_t>(
        rng.uniform_int(1, static_cast<int>(n)));
    std::vector<double> w(n, 0.0);
    w[lag - 1] = 1.0;
    CHECK(forecast_uni(BeliefVector::from_weights(w), window) ==
          window.values[lag - 1]);
  }
}

TEST_CASE("the true averaging kernel forecasts a noise-free pair exactly") {
  const std::size_t tau = 10;
  const std::vector<double> x = gen_ar1(300, 0.9, 123);
  LagPath path;
  path.taus.assign(x.size(), static_cast<int>(tau));
  Rng rng(0);
  const LaggedSeries y = apply_lag_averaged(x, path, 0.0, rng);

  std::vector<double> kernel(30, 0.0);
  for (std::size_t lag = tau - 3; lag <= tau + 3; ++lag) {
    kernel[lag - 1] = 1.0 / 7.0;
  }
  const BeliefVector truth = BeliefVector::from_weights(kernel);

  for (std::size_t t = 31; t <= x.size(); ++t) {
    const double y_t = y.values[t - y.start_t];
    const double y_hat = forecast_uni(truth, LagWindow::at(x, t, 30));
    CHECK(y_hat - y_t == 0.0);  // bit-exact by shared accumulation order
  }
}

TEST_CASE("sign-regime forecast subtracts the negative column") {
  const LagWindow window{{7, 9, 11}};
  CHECK(forecast_posneg(BeliefMatrix::from_columns({0, 1, 0}, {0, 0, 0}),
                        window) == 9.0);
  CHECK(forecast_posneg(BeliefMatrix::from_columns({0, 0, 0}, {0, 1, 0}),
                        window) == -9.0);
  CHECK(forecast_posneg(
            BeliefMatrix::from_columns({0, 0.5, 0}, {0, 0.5, 0}), window) ==
        0.0);
}

TEST_CASE("bidirectional forecast renormalizes each live column") {
  const double eps = kDefaultFloor;
  SUBCASE("a floored column is flagged undefined") {
    const BeliefMatrix w = BeliefMatrix::from_columns(
        {0.0, 0.0, 1.0 - 3 * eps}, {eps, eps, eps});
    const DirectionalForecast f = forecast_bidirectional(
        w, LagWindow{{4, 5, 6}}, LagWindow{{14, 15, 16}});
    REQUIRE(f.y_hat_defined);
    CHECK(f.y_hat == Approx(6.0).epsilon(1e-12));
    CHECK_FALSE(f.x_hat_defined);
    CHECK(std::isnan(f.x_hat));
    CHECK(f.x_leads_mass == Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("symmetric beliefs over a shared constant window agree") {
    const BeliefMatrix w =
        BeliefMatrix::from_columns({0.25, 0.25}, {0.25, 0.25});
    const DirectionalForecast f =
        forecast_bidirectional(w, LagWindow{{3, 3}}, LagWindow{{3, 3}});
    CHECK(f.y_hat == Approx(3.0).epsilon(1e-12));
    CHECK(f.x_hat == Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("renormalization rescales a partial column") {
    const BeliefMatrix w = BeliefMatrix::from_columns({0.3, 0.3}, {0.2, 0.2});
    const DirectionalForecast f =
        forecast_bidirectional(w, LagWindow{{2, 4}}, LagWindow{{8, 10}});
    CHECK(f.y_hat == Approx(3.0).epsilon(1e-12));
    CHECK(f.x_hat == Approx(9.0).epsilon(1e-12));
    CHECK(f.x_leads_mass == Approx(0.6).epsilon(1e-12));
    CHECK(f.y_leads_mass == Approx(0.4).epsilon(1e-12));
  }
}

TEST_CASE("identical inputs keep the bidirectional beliefs symmetric") {
  const std::vector<double> x = gen_ar1(150, 0.9, 7);
  MatrixLagFilter filter(FilterOptions{.n_states = 8});
  for (std::size_t t = 9; t <= x.size(); ++t) {
    const LagWindow w = LagWindow::at(x, t, 8);
    filter.step(distances_bidirectional(w, w, x[t - 1], x[t - 1]));
    const BeliefMatrix& b = filter.beliefs();
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(std::abs(b.col1()[i] - b.col2()[i]) <= 1e-9);
    }
  }
}
