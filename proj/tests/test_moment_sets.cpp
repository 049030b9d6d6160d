#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dfnv/discrete_distribution.hpp"
#include "dfnv/metrics.hpp"
#include "dfnv/moment_sets.hpp"
#include "test_support.hpp"

using namespace dfnv;

TEST_CASE("first-moment ball membership") {
  CHECK(in_first_moment_ball(delta(2.0), 2.0, 0.5));
  CHECK_FALSE(in_first_moment_ball(delta(2.0 + 2.0 * 0.5), 2.0, 0.5));
  for (unsigned n = 1; n <= 1000; n += 7) {
    CHECK(in_first_moment_ball(mean_escape_sequence(1.5, n), 0.0, 1.5));
  }
}

TEST_CASE("moment class membership") {
  const MomentClassSpec spec(0.0, 1.0, 3.0, 1.0, 20.0);
  CHECK(spec.contains(delta(1.0)));          // first moment at the lower edge
  CHECK(spec.contains(delta(3.0)));          // and at the upper edge
  CHECK_FALSE(spec.contains(delta(0.5)));    // mean below a
  CHECK_FALSE(spec.contains(delta(3.5)));    // mean above b
  CHECK(spec.contains(delta(2.0)));          // interior

  // heavy tail versus the raw moment cap
  const auto spread = make_discrete({0.0, 10.0}, {0.8, 0.2});  // E|x| = 2, E x^2 = 20
  CHECK(spec.contains(spread));
  const auto heavier = make_discrete({0.0, 10.0}, {0.7, 0.3});  // E x^2 = 30
  CHECK_FALSE(spec.contains(heavier));

  CHECK_THROWS_AS(MomentClassSpec(0.0, 2.0, 1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MomentClassSpec(0.0, 0.0, 1.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MomentClassSpec(0.0, 0.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("escaping-mass members stay in the class their limit leaves") {
  const double a = 2.0;
  const MomentClassSpec spec(0.0, a, a + 1.0, 1.0, 1e9);
  for (unsigned n : {1u, 2u, 10u, 500u}) {
    CHECK(in_first_moment_ball(mean_escape_sequence(a, n), 0.0, a));
  }
  CHECK_FALSE(spec.contains(delta(a / 2.0)));  // the weak limit drops out
}

TEST_CASE("uniform tail radius certificate") {
  CHECK(uniform_tail_radius(1.0, 0.5) == 4.0);
  CHECK_THROWS_AS(uniform_tail_radius(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(uniform_tail_radius(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(uniform_tail_radius(0.0, 0.5), std::domain_error);

  // the point mass at b sits inside every certified radius
  CHECK(tail_mass_outside(delta(1.0), 0.0, uniform_tail_radius(1.0, 0.5)) == 0.0);

  dfnv::Rng rng(61);
  const double b = 5.0;
  for (double eps : {0.1, 0.5}) {
    const double radius = uniform_tail_radius(b, eps);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto member = testgen::random_first_moment_member(rng, b);
      REQUIRE(in_first_moment_ball(member, 0.0, b));
      CHECK(tail_mass_outside(member, 0.0, radius) <= eps / 2.0 + 1e-12);
    }
  }
}

TEST_CASE("moment tail radius certificate") {
  CHECK(moment_tail_radius(1.0, 1.0, 0.1) == Catch::Approx(10.0).margin(1e-12));
  CHECK(moment_tail_radius(1.0, 1.0, 1.5) <= 1.0);
  CHECK(moment_tail_radius(1.0, 1.0, 1.0) == 1.0);
  CHECK_THROWS_AS(moment_tail_radius(0.0, 1.0, 0.1), std::domain_error);

  dfnv::Rng rng(67);
  const double cap = 25.0;
  for (double eps : {0.1, 0.5}) {
    const double radius = moment_tail_radius(cap, 1.0, eps);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto member = testgen::random_second_moment_member(rng, cap);
      REQUIRE(abs_moment(member, 0.0, 2.0) <= cap + 1e-12);
      CHECK(first_moment_tail(member, 0.0, radius) < eps + 1e-12);
    }
  }
}

TEST_CASE("tightness report") {
  CHECK(tightness_report({delta(0.0)}, 0.3, 0.0).radius == 0.0);
  CHECK(tightness_report({delta(0.0)}, 0.3, 0.0).uniform);
  CHECK_THROWS_AS(tightness_report({}, 0.3, 0.0), std::invalid_argument);

  // prefixes of the nontight family need ever larger radii
  const auto base = delta(0.0);
  std::vector<DiscreteDistribution> family;
  for (unsigned n = 1; n <= 20; ++n) family.push_back(nontight_sequence(base, 0.25, n));
  const auto report = tightness_report(family, 0.4, 0.0);
  CHECK(report.uniform);
  CHECK(report.radius >= 20.0);

  // members of a first-moment ball obey the Markov radius
  dfnv::Rng rng(71);
  const double b = 5.0, eps = 0.2;
  std::vector<DiscreteDistribution> ball;
  for (int i = 0; i < 50; ++i) ball.push_back(testgen::random_first_moment_member(rng, b));
  CHECK(tightness_report(ball, eps, 0.0).radius <= uniform_tail_radius(b, 2.0 * eps));
}

TEST_CASE("nontight sequence for a point-mass base") {
  const auto d = nontight_sequence(delta(0.0), 0.25, 5);
  REQUIRE(d.size() == 3);
  CHECK(d.support() == std::vector<double>{-5.0, 0.0, 5.0});
  CHECK(d.weights() == std::vector<double>{0.25, 0.5, 0.25});

  CHECK_THROWS_AS(nontight_sequence(delta(0.0), 0.5, 3), std::domain_error);
  CHECK_THROWS_AS(nontight_sequence(delta(0.0), 0.0, 3), std::domain_error);
  CHECK_THROWS_AS(nontight_sequence(delta(0.0), 0.25, 0), std::domain_error);
}

TEST_CASE("nontight sequence keeps the base when n stays inside the window") {
  // window edges at -3 and 4, so members up to n = 4 are the base itself
  const auto base = make_discrete({-3.0, 4.0}, {0.3, 0.7});
  for (unsigned n : {1u, 2u, 4u}) {
    const auto d = nontight_sequence(base, 0.25, n);
    CHECK(d.support() == base.support());
    CHECK(d.weights() == base.weights());
  }
  const auto moved = nontight_sequence(base, 0.25, 5);
  REQUIRE(moved.size() == 4);
  CHECK(moved.support() == std::vector<double>{-5.0, -3.0, 4.0, 5.0});
  CHECK(moved.weights()[0] == 0.25);
  CHECK(moved.weights()[1] == Catch::Approx(0.05).margin(1e-15));
  CHECK(moved.weights()[2] == Catch::Approx(0.45).margin(1e-15));
  CHECK(moved.weights()[3] == 0.25);
}

TEST_CASE("nontight sequence CDF matches the branch values") {
  dfnv::Rng rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const auto base = testgen::random_discrete(rng, 6, -4.0, 4.0);
    const double r = rng.uniform(0.05, 0.45);
    const unsigned n = 6 + static_cast<unsigned>(rng.below(40));
    const auto d = nontight_sequence(base, r, n);
    if (d.support() == base.support()) continue;  // small-n branch

    // window edges recomputed from the definition
    const auto& cum = base.cumulative();
    const auto& sup = base.support();
    const std::size_t ia = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), r) - cum.begin());
    const std::size_t ib = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), 1.0 - r) - cum.begin());
    const double ar = sup[ia], br = sup[ib];

    CHECK(cdf(d, -static_cast<double>(n) - 1e-9) == 0.0);
    CHECK(cdf(d, static_cast<double>(n)) == 1.0);
    // sandwich on the flats, probed at a few interior points
    for (double x :
         {-static_cast<double>(n), 0.5 * (-static_cast<double>(n) + ar),
          std::nextafter(ar, -1e9), br, 0.5 * (br + n), std::nextafter((double)n, -1e9)}) {
      const double F = cdf(d, x);
      if (x < ar || x >= br) {
        CHECK(F >= r - 1e-12);
        CHECK(F <= 1.0 - r + 1e-12);
      }
    }
    // the CDF agrees with the base on [ar, br)
    for (double x : base.support()) {
      if (x >= ar && x < br) CHECK(cdf(d, x) == Catch::Approx(cdf(base, x)).margin(1e-12));
    }
    // non-tightness witness: mass 2r sits outside every radius below n
    CHECK(tail_mass_outside(d, 0.0, n - 0.5) >= 2.0 * r - 1e-12);
  }
}

TEST_CASE("escaping-mass sequence") {
  const auto d1 = mean_escape_sequence(3.0, 1);
  REQUIRE(d1.size() == 1);
  CHECK(d1.support()[0] == 3.0);

  const double a = 3.0;
  const auto d2 = mean_escape_sequence(a, 2);
  REQUIRE(d2.size() == 2);
  CHECK(d2.support()[0] == 2.0 * a / 3.0);
  CHECK(d2.support()[1] == 2.0 * a);
  CHECK(d2.weights()[0] == 0.75);
  CHECK(d2.weights()[1] == 0.25);
  CHECK(moments(d2).mean == Catch::Approx(a).margin(1e-12));

  for (unsigned n = 1; n <= 1000; ++n) {
    CHECK(std::fabs(moments(mean_escape_sequence(a, n)).mean - a) <= 1e-12);
  }
  CHECK(std::fabs(abs_moment(mean_escape_sequence(a, 1000000), 0.0, 1.0) - a) <= 1e-12);

  CHECK_THROWS_AS(mean_escape_sequence(0.0, 3), std::domain_error);
  CHECK_THROWS_AS(mean_escape_sequence(1.0, 0), std::domain_error);
}

TEST_CASE("weak convergence probe") {
  const auto constant = delta(1.0);
  auto constant_seq = [&](unsigned) { return constant; };
  const std::vector<double> grid{-1.0, 0.0, 0.5, 2.0};
  CHECK(weak_convergence_probe(constant_seq, constant, grid, 3) == 0.0);

  const double a = 1.0;
  const auto limit = delta(a / 2.0);
  auto escape = [&](unsigned n) { return mean_escape_sequence(a, n); };
  std::vector<double> wide;
  for (int i = 0; i < 100; ++i) wide.push_back(2.0 * a * i / 99.0);
  for (unsigned n : {1000u, 100000u}) {
    CHECK(weak_convergence_probe(escape, limit, wide, n) <= 1.0 / (2.0 * n) + 1e-12);
  }

  // base comparison for the nontight family: the central window is untouched
  const auto base = make_discrete({-1.0, 0.0, 1.0}, {0.3, 0.4, 0.3});
  auto spread = [&](unsigned n) { return nontight_sequence(base, 0.25, n); };
  CHECK(weak_convergence_probe(spread, base, {-0.5, 0.0, 0.5}, 30) == 0.0);

  // a grid hugging the limit atom is filtered down to nothing
  CHECK_THROWS_AS(weak_convergence_probe(escape, limit, {a / 2.0, a / 2.0 + 1e-10}, 5),
                  std::invalid_argument);
}
