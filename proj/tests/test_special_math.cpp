#include <cmath>
#include <stdexcept>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "hetcache/special_math.hpp"

using namespace hetcache;

namespace {

// Independent oracle: plain composite Simpson on [x, cutoff] with a dense
// fixed grid. Slow and simple on purpose.
double simpson_gamma(double a, double x, double cutoff = 80.0, int n = 400000) {
  auto f = [&](double s) { return std::pow(s, a - 1.0) * std::exp(-s); };
  double h = (cutoff - x) / n;
  double sum = f(x) + f(cutoff);
  for (int i = 1; i < n; ++i) sum += f(x + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("upper incomplete gamma closed forms") {
  CHECK(upper_incomplete_gamma(1.0, 2.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
  // Gamma(2, x) = (1 + x) e^-x, nearly Gamma(2) = 1 at small x
  CHECK(upper_incomplete_gamma(2.0, 0.001) == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(upper_incomplete_gamma(2.0, 0.5) ==
        doctest::Approx(1.5 * std::exp(-0.5)).epsilon(1e-10));
  // Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))
  CHECK(upper_incomplete_gamma(0.5, 2.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(2.0)))
            .epsilon(1e-10));
  // Gamma(-1/2, x) = 2 (e^-x / sqrt(x) - sqrt(pi) erfc(sqrt(x)))
  double closed =
      2.0 * (std::exp(-1.0) - std::sqrt(std::numbers::pi) * std::erfc(1.0));
  CHECK(upper_incomplete_gamma(-0.5, 1.0) == doctest::Approx(closed).epsilon(1e-10));
}

TEST_CASE("upper incomplete gamma against a brute-force quadrature oracle") {
  for (double a : {-0.5, -2.3, 0.7, 1.0, 3.5}) {
    for (double x : {0.25, 1.0, 4.0}) {
      double oracle = simpson_gamma(a, x);
      CHECK(upper_incomplete_gamma(a, x) ==
            doctest::Approx(oracle).epsilon(1e-8));
    }
  }
}

TEST_CASE("gamma domain errors") {
  CHECK_THROWS_AS(upper_incomplete_gamma(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(upper_incomplete_gamma(-1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(upper_incomplete_gamma(std::nan(""), 1.0),
                  std::invalid_argument);
}

TEST_CASE("gamma is strictly decreasing in x") {
  for (double a : {-1.5, 0.5, 2.0}) {
    double prev = upper_incomplete_gamma(a, 0.1);
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      double cur = upper_incomplete_gamma(a, x);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("log variant stays finite where the plain value cannot") {
  // x large: value underflows double but the log is fine
  double lg = log_upper_incomplete_gamma(0.5, 900.0);
  CHECK(std::isfinite(lg));
  CHECK(lg < -890.0);
  // strongly negative a at tiny x: integral ~ x^a / (-a)
  double big = log_upper_incomplete_gamma(-9.0, 1e-9);
  CHECK(big == doctest::Approx(9.0 * std::log(1e9) - std::log(9.0)).epsilon(1e-6));
}

TEST_CASE("scalar minimization") {
  SUBCASE("quadratic bowl") {
    auto f = [](double t) { return (t - 1.0) * (t - 1.0); };
    MinimizerResult res = minimize_scalar(f, 1e-6, 3.0);
    CHECK(res.converged);
    CHECK(res.argmin == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(res.value == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(!res.at_lower_edge);
    CHECK(!res.at_upper_edge);
  }
  SUBCASE("monotone objective flags the boundary") {
    MinimizerResult res =
        minimize_scalar([](double t) { return std::exp(t); }, 0.5, 4.0);
    CHECK(res.at_lower_edge);
    CHECK(res.argmin == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("non-finite everywhere is an error") {
    CHECK_THROWS_AS(minimize_scalar(
                        [](double) {
                          return std::numeric_limits<double>::quiet_NaN();
                        },
                        0.0, 1.0),
                    std::invalid_argument);
  }
  SUBCASE("result never exceeds a dense grid minimum") {
    // shape matching a Chernoff log-exponent at theta=100, load=0.01, T=1
    auto objective = [](double t) {
      double theta = 100.0;
      double x = 1.0 / theta;
      double a = 1.0 - t / std::numbers::ln2;
      return t * 0.01 + x + std::log(upper_incomplete_gamma(a, x)) -
             (t / std::numbers::ln2) * std::log(theta);
    };
    MinimizerResult res = minimize_scalar(objective, 1e-6, 6.931471805599453);
    double grid_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
      double t = 1e-6 + (6.931471805599453 - 1e-6) * i / 99.0;
      grid_min = std::min(grid_min, objective(t));
    }
    CHECK(res.value <= grid_min + 1e-12);
  }
}

TEST_CASE("truncated series") {
  SUBCASE("geometric series") {
    SeriesResult res = truncated_series_sum(
        [](int t) { return std::pow(2.0, -t); }, 1e-6, 10000);
    CHECK(res.converged);
    CHECK(res.sum == doctest::Approx(1.0).epsilon(1e-5));
  }
  SUBCASE("all-zero terms stop immediately") {
    SeriesResult res = truncated_series_sum([](int) { return 0.0; }, 1e-6, 100);
    CHECK(res.converged);
    CHECK(res.terms == 1);
    CHECK(res.sum == 0.0);
  }
  SUBCASE("non-convergence is reported") {
    SeriesResult res = truncated_series_sum([](int) { return 1.0; }, 1e-9, 50);
    CHECK(!res.converged);
    CHECK(res.terms == 50);
    CHECK(res.sum == doctest::Approx(50.0));
  }
  SUBCASE("negative terms are rejected") {
    CHECK_THROWS_AS(
        truncated_series_sum([](int t) { return t == 3 ? -1.0 : 0.5; }, 1e-6, 10),
        std::invalid_argument);
  }
  SUBCASE("truncated sum is within 1% of a 10x-longer horizon") {
    auto term = [](int t) { return std::exp(-0.9 * t); };
    SeriesResult res = truncated_series_sum(term, 1e-6, 1000);
    CHECK(res.converged);
    double extended = 0.0;
    for (int t = 1; t <= 10 * res.terms; ++t) extended += term(t);
    CHECK(res.sum == doctest::Approx(extended).epsilon(0.01));
  }
}
