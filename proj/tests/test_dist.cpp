#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <vector>

#include "dfnv/discrete_distribution.hpp"
#include "dfnv/json_io.hpp"
#include "dfnv/newsvendor.hpp"
#include "dfnv/rng.hpp"
#include "test_support.hpp"

using namespace dfnv;

TEST_CASE("make_discrete basic construction") {
  const auto d0 = make_discrete({0.0}, {1.0});
  CHECK(d0.support() == std::vector<double>{0.0});
  CHECK(d0.weights() == std::vector<double>{1.0});

  const auto two = make_discrete({1.0, 2.0}, {0.5, 0.5});
  CHECK(two.support() == std::vector<double>{1.0, 2.0});
  CHECK(two.weights() == std::vector<double>{0.5, 0.5});

  // duplicates merge into a point mass
  const auto merged = make_discrete({1.0, 1.0}, {0.5, 0.5});
  CHECK(merged.size() == 1);
  CHECK(merged.support()[0] == 1.0);
  CHECK(merged.weights()[0] == 1.0);
}

TEST_CASE("make_discrete normalizes, drops zeros, sorts") {
  const auto d = make_discrete({3.0, 1.0, 2.0}, {2.0, 1.0, 0.0});
  REQUIRE(d.size() == 2);
  CHECK(d.support() == std::vector<double>{1.0, 3.0});
  CHECK(d.weights()[0] == Catch::Approx(1.0 / 3.0).margin(1e-15));
  CHECK(d.weights()[1] == Catch::Approx(2.0 / 3.0).margin(1e-15));
}

TEST_CASE("make_discrete rejects bad input") {
  CHECK_THROWS_AS(make_discrete({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_discrete({1.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_discrete({1.0, 2.0}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_discrete({1.0}, {-0.5}), std::invalid_argument);
  CHECK_THROWS_AS(make_discrete({std::nan("")}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_discrete({1.0}, {std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
}

TEST_CASE("cdf values and right-continuity") {
  const auto d0 = delta(0.0);
  CHECK(cdf(d0, -1.0) == 0.0);
  CHECK(cdf(d0, 0.0) == 1.0);

  const auto d = make_discrete({1.0, 3.0}, {0.25, 0.75});
  CHECK(cdf(d, 2.0) == 0.25);
  CHECK(cdf(d, 0.5) == 0.0);
  CHECK(cdf(d, 3.0) == 1.0);

  dfnv::Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = testgen::random_discrete(rng, 6, -5.0, 5.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double jump = cdf(x, x.support()[i]) - cdf(x, x.support()[i] - 1e-12);
      CHECK(std::fabs(jump - x.weights()[i]) <= 1e-12);
    }
  }
}

TEST_CASE("quantile basics and domain") {
  CHECK(quantile(delta(5.0), 0.5) == 5.0);
  const auto d = make_discrete({1.0, 3.0}, {0.25, 0.75});
  CHECK(quantile(d, 0.25) == 1.0);
  CHECK(quantile(d, 0.26) == 3.0);
  CHECK(quantile(d, 1.0) == 3.0);
  CHECK_THROWS_AS(quantile(d, 0.0), std::domain_error);
  CHECK_THROWS_AS(quantile(d, -0.1), std::domain_error);
  CHECK_THROWS_AS(quantile(d, 1.0 + 1e-9), std::domain_error);
}

TEST_CASE("quantile/cdf Galois connection") {
  dfnv::Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = testgen::random_discrete(rng, 6, -4.0, 4.0);
    double tau = rng.uniform(1e-6, 1.0);
    // keep tau clear of the jump values
    bool nearJump = false;
    for (double c : d.cumulative()) {
      if (std::fabs(tau - c) < 1e-9) nearJump = true;
    }
    if (nearJump) continue;
    const double x = rng.uniform(-5.0, 5.0);
    CHECK((quantile(d, tau) <= x) == (cdf(d, x) >= tau));
  }
}

TEST_CASE("moments of simple laws") {
  const double m = 4.0, s = 1.5;
  const auto two = make_discrete({m - s, m + s}, {0.5, 0.5});
  const auto mom = moments(two);
  CHECK(mom.mean == Catch::Approx(m).margin(1e-12));
  CHECK(mom.variance == Catch::Approx(s * s).margin(1e-12));

  const auto point = moments(delta(-2.5));
  CHECK(point.mean == -2.5);
  CHECK(point.variance == 0.0);

  const auto escape = moments(mean_escape_sequence(3.0, 2));
  CHECK(escape.mean == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("variance is nonnegative and matches the second central moment") {
  dfnv::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = testgen::random_discrete(rng, 7, -10.0, 10.0);
    const auto mom = moments(d);
    CHECK(mom.variance >= 0.0);
    CHECK(std::fabs(mom.variance - abs_moment(d, mom.mean, 2.0)) <= 1e-9);
  }
}

TEST_CASE("abs_moment") {
  CHECK(abs_moment(delta(0.0), 0.0, 1.0) == 0.0);
  CHECK(abs_moment(delta(0.0), 0.0, 3.7) == 0.0);
  const auto sym = make_discrete({-1.0, 1.0}, {0.5, 0.5});
  CHECK(abs_moment(sym, 0.0, 2.0) == Catch::Approx(1.0).margin(1e-15));
  for (unsigned n : {1u, 2u, 5u, 77u, 4096u}) {
    CHECK(std::fabs(abs_moment(mean_escape_sequence(2.0, n), 0.0, 1.0) - 2.0) <= 1e-12);
  }
}

TEST_CASE("expected_excess and put-call parity") {
  CHECK(expected_excess(delta(5.0), 3.0) == 2.0);
  const auto two = make_discrete({2.0, 6.0}, {0.5, 0.5});  // m=4, s=2
  CHECK(expected_excess(two, 4.0) == Catch::Approx(1.0).margin(1e-15));
  CHECK(expected_excess(two, 6.0) == 0.0);
  CHECK(expected_excess(two, 100.0) == 0.0);

  dfnv::Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = testgen::random_discrete(rng, 6, -5.0, 5.0);
    const double x = rng.uniform(-6.0, 6.0);
    double shortfall = 0.0;  // sum w max(x - x_i, 0)
    for (std::size_t i = 0; i < d.size(); ++i) {
      shortfall += d.weights()[i] * std::max(x - d.support()[i], 0.0);
    }
    const double lhs = expected_excess(d, x) + x - moments(d).mean;
    CHECK(std::fabs(lhs - shortfall) <= 1e-12);
  }
}

TEST_CASE("mix combines atoms and is linear in the mean") {
  const auto m = mix({delta(0.0), delta(2.0)}, {0.5, 0.5});
  CHECK(m.support() == std::vector<double>{0.0, 2.0});
  CHECK(m.weights() == std::vector<double>{0.5, 0.5});

  dfnv::Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testgen::random_discrete(rng, 5, -3.0, 3.0);
    const auto b = testgen::random_discrete(rng, 5, -3.0, 3.0);
    const double alpha = rng.uniform(0.0, 1.0);
    const auto mixed = mix({a, b}, {alpha, 1.0 - alpha});
    const double want = alpha * moments(a).mean + (1.0 - alpha) * moments(b).mean;
    CHECK(moments(mixed).mean == Catch::Approx(want).margin(1e-10));
  }

  CHECK_THROWS_AS(mix({delta(0.0)}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(mix({delta(0.0), delta(1.0)}, {0.7, 0.7}), std::invalid_argument);
}

TEST_CASE("mixing equal-moment laws preserves the moments") {
  // two members of the family with mean m and variance s2, taken from the
  // two-point attainers at distinct stock levels
  dfnv::Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const double m = rng.uniform(2.0, 10.0);
    const double s2 = rng.uniform(0.1, (m / 2) * (m / 2));
    const auto u = worst_case_two_point(m + rng.uniform(0.0, 2.0), m, s2);
    const auto v = worst_case_two_point(m - rng.uniform(0.0, 1.0), m, s2);
    const double alpha = rng.uniform(0.05, 0.95);
    const auto mom = moments(mix({u, v}, {alpha, 1.0 - alpha}));
    CHECK(mom.mean == Catch::Approx(m).margin(1e-10));
    CHECK(mom.variance == Catch::Approx(s2).margin(1e-9));
  }
}

TEST_CASE("json round-trip is bit-identical") {
  dfnv::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = testgen::random_discrete(rng, 8, -7.0, 7.0);
    const auto restored = distribution_from_json(nlohmann::json::parse(to_json(d).dump()));
    REQUIRE(restored.size() == d.size());
    CHECK(std::memcmp(restored.support().data(), d.support().data(),
                      d.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(restored.weights().data(), d.weights().data(),
                      d.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("json loading validates the schema") {
  CHECK_THROWS_AS(distribution_from_json(nlohmann::json::parse("[1,2]")),
                  DistributionFileError);
  CHECK_THROWS_AS(distribution_from_json(nlohmann::json::parse("{\"support\": [1]}")),
                  DistributionFileError);
  CHECK_THROWS_AS(
      distribution_from_json(nlohmann::json::parse("{\"support\": [1], \"weights\": [0]}")),
      DistributionFileError);
  CHECK_THROWS_AS(load_distribution("/nonexistent/nowhere.json"), DistributionFileError);
}
