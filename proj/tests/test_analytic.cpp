#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rachsim/analytic.hpp"
#include "rachsim/core.hpp"
#include "rachsim/rng.hpp"

using namespace rachsim;

TEST_CASE("RA opportunities per second: preambles x slots x 100 frames") {
  CHECK(analytic::ra_opportunities_per_second(54, 2) == doctest::Approx(10800.0));
  CHECK(analytic::ra_opportunities_per_second(16, 2) == doctest::Approx(3200.0));
  CHECK(analytic::ra_opportunities_per_second(30, 10) == doctest::Approx(30000.0));
  CHECK_THROWS_AS(analytic::ra_opportunities_per_second(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(analytic::ra_opportunities_per_second(54, 0), std::invalid_argument);
}

TEST_CASE("collision probability anchor points") {
  // 754 devices over a 200 ms wave window
  CHECK(analytic::collision_probability(754, 10800, 0.2) == doctest::Approx(0.295).epsilon(0.0035));
  CHECK(analytic::collision_probability(754, 3240, 0.2) == doctest::Approx(0.688).epsilon(0.0015));
  CHECK(analytic::collision_probability(0, 10800, 0.2) == doctest::Approx(0.0));
  // monotone in n, saturates toward 1
  double prev = 0.0;
  for (double n = 100; n <= 100000; n *= 2) {
    const double p = analytic::collision_probability(n, 10800, 0.2);
    CHECK(p > prev);
    CHECK(p < 1.0);
    prev = p;
  }
  CHECK_THROWS_AS(analytic::collision_probability(10, 0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(analytic::collision_probability(-1, 10800, 0.2), std::invalid_argument);
}

TEST_CASE("codeword count (M+1)^L - 1") {
  CHECK(analytic::codeword_count(54, 2) == 55 * 55 - 1);
  CHECK(analytic::codeword_count(1, 1) == 1);
  CHECK(analytic::codeword_count(30, 3) == 31LL * 31 * 31 - 1);
  CHECK_THROWS_AS(analytic::codeword_count(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(analytic::codeword_count(1000000, 100), std::overflow_error);
}

TEST_CASE("worst-case reserved preambles m^d x q") {
  CHECK(analytic::worst_case_reserved(2, 3, 30) == 240);
  CHECK(analytic::worst_case_reserved(3, 0, 30) == 30);
  CHECK(analytic::worst_case_reserved(4, 2, 1) == 16);
  CHECK_THROWS_AS(analytic::worst_case_reserved(1, 3, 30), std::invalid_argument);
  CHECK_THROWS_AS(analytic::worst_case_reserved(2, -1, 30), std::invalid_argument);
  CHECK_THROWS_AS(analytic::worst_case_reserved(10, 100, 30), std::overflow_error);
}

TEST_CASE("expected singletons matches a Monte-Carlo balls-into-bins oracle") {
  Rng rng(2024);
  for (const auto [n, k] : {std::pair{10, 30}, {30, 30}, {54, 54}, {100, 30}}) {
    const int trials = 20000;
    long long singles = 0;
    std::vector<int> bins(static_cast<std::size_t>(k));
    for (int t = 0; t < trials; ++t) {
      std::fill(bins.begin(), bins.end(), 0);
      for (int i = 0; i < n; ++i) bins[rng.index(static_cast<std::size_t>(k))] += 1;
      for (int b : bins) singles += b == 1;
    }
    const double mc = static_cast<double>(singles) / trials;
    const double closed = analytic::expected_singletons(n, k);
    // singleton counts across bins are negatively correlated; the per-trial
    // variance is below k * p * (1-p)
    const double p1 = closed / k;
    const double se = std::sqrt(k * p1 * (1 - p1) / trials);
    CHECK(std::abs(mc - closed) < 4.0 * se + 0.02);
  }
  CHECK(analytic::expected_singletons(0, 30) == doctest::Approx(0.0));
  CHECK(analytic::expected_singletons(1, 30) == doctest::Approx(1.0));
  CHECK_THROWS_AS(analytic::expected_singletons(-1, 30), std::invalid_argument);
  CHECK_THROWS_AS(analytic::expected_singletons(10, 0), std::invalid_argument);
}
