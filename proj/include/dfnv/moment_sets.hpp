#pragma once
// Moment-constrained families of distributions, computable tightness
// certificates, and the two counterexample sequences exposed by the CLI
// (`prop3`: a non-tight family staying inside a Kolmogorov ball around a
// base distribution; `prop5`: a constant-mean family whose weak limit drops
// out of the mean-bounded class).
//
// Only classes with finite moment caps get predicates here; the unions over
// all caps carry no checkable content for a single finitely supported
// measure beyond membership in some capped class.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dfnv/discrete_distribution.hpp"

namespace dfnv {

// Mass bounds around a base point: first absolute moment about x0 in
// [a, b], (1+r)-th absolute moment at most moment_cap.
struct MomentClassSpec {
  double x0;
  double a;
  double b;
  double r;
  double moment_cap;

  MomentClassSpec(double x0_, double a_, double b_, double r_, double moment_cap_)
      : x0(x0_), a(a_), b(b_), r(r_), moment_cap(moment_cap_) {
    if (!(a >= 0.0 && a < b) || !(r > 0.0) || !(moment_cap > 0.0)) {
      throw std::invalid_argument("MomentClassSpec: need 0 <= a < b, r > 0, moment_cap > 0");
    }
  }

  bool contains(const DiscreteDistribution& d) const {
    const double m1 = abs_moment(d, x0, 1.0);
    if (m1 < a - 1e-12 || m1 > b + 1e-12) return false;
    return abs_moment(d, x0, 1.0 + r) <= moment_cap + 1e-12;
  }
};

// First absolute moment about x0 bounded by b.
inline bool in_first_moment_ball(const DiscreteDistribution& d, double x0, double b) {
  return abs_moment(d, x0, 1.0) <= b + 1e-12;
}

// Radius 2b/eps: every distribution with first absolute moment <= b about
// x0 puts mass at most eps/2 outside [x0 - radius, x0 + radius], by the
// Markov inequality.
inline double uniform_tail_radius(double b, double epsilon) {
  if (!(b > 0.0)) throw std::domain_error("uniform_tail_radius: b must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::domain_error("uniform_tail_radius: epsilon must lie in (0, 1)");
  }
  return 2.0 * b / epsilon;
}

// Radius (moment_cap/eps)^(1/r): whenever the (1+r)-th absolute moment about
// x0 is at most moment_cap, the first-moment tail beyond this radius stays
// below eps (up to rounding).
inline double moment_tail_radius(double moment_cap, double r, double epsilon) {
  if (!(moment_cap > 0.0) || !(r > 0.0) || !(epsilon > 0.0)) {
    throw std::domain_error("moment_tail_radius: moment_cap, r and epsilon must be positive");
  }
  return std::pow(moment_cap / epsilon, 1.0 / r);
}

// Mass outside the closed interval [x0 - radius, x0 + radius].
inline double tail_mass_outside(const DiscreteDistribution& d, double x0, double radius) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (std::fabs(d.support()[i] - x0) > radius) acc += d.weights()[i];
  }
  return acc;
}

// sum of w |x - x0| over atoms with |x - x0| >= radius.
inline double first_moment_tail(const DiscreteDistribution& d, double x0, double radius) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double y = std::fabs(d.support()[i] - x0);
    if (y >= radius) acc += d.weights()[i] * y;
  }
  return acc;
}

// Smallest R such that [x0 - R, x0 + R] carries mass at least 1 - epsilon.
inline double tail_radius(const DiscreteDistribution& d, double x0, double epsilon) {
  std::vector<std::pair<double, double>> byRadius;
  byRadius.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    byRadius.emplace_back(std::fabs(d.support()[i] - x0), d.weights()[i]);
  }
  std::sort(byRadius.begin(), byRadius.end());
  const double need = 1.0 - epsilon - 1e-12;
  double acc = 0.0;
  for (std::size_t i = 0; i < byRadius.size(); ++i) {
    acc += byRadius[i].second;
    // absorb atoms tied at the same radius
    while (i + 1 < byRadius.size() && byRadius[i + 1].first == byRadius[i].first) {
      acc += byRadius[++i].second;
    }
    if (acc >= need) return byRadius[i].first;
  }
  return byRadius.back().first;
}

struct TightnessWitness {
  std::size_t member;  // index into the family
  double tail_mass;
};

struct TightnessReport {
  double epsilon;
  double radius;
  bool uniform;
  std::optional<TightnessWitness> witness;
};

// Minimal common radius R such that every family member keeps mass
// >= 1 - epsilon on [x0 - R, x0 + R]. A finite family always admits one, so
// uniform is true here; non-tightness of a generated sequence shows up as
// unbounded radius growth across its prefixes.
inline TightnessReport tightness_report(const std::vector<DiscreteDistribution>& family,
                                        double epsilon, double x0) {
  if (family.empty()) throw std::invalid_argument("tightness_report: empty family");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::domain_error("tightness_report: epsilon must lie in (0, 1)");
  }
  double radius = 0.0;
  for (const auto& d : family) radius = std::max(radius, tail_radius(d, x0, epsilon));
  return {epsilon, radius, true, std::nullopt};
}

// Non-tight family inside a Kolmogorov ball of radius rparam around `base`:
// member n keeps the base CDF on the central window [a_r, b_r) where
//   a_r = first atom with F >= rparam,   b_r = first atom with F >= 1 - rparam,
// flattens it to rparam left of the window and to 1 - rparam right of it,
// and parks mass rparam on each of the atoms -n and n. For n small enough
// that +-n would intrude on the window (n <= max(|a_r|, |b_r|)) the base is
// returned unchanged.
inline DiscreteDistribution nontight_sequence(const DiscreteDistribution& base,
                                              double rparam, unsigned n) {
  if (!(rparam > 0.0 && rparam < 0.5)) {
    throw std::domain_error("nontight_sequence: rparam must lie in (0, 1/2)");
  }
  if (n == 0) throw std::domain_error("nontight_sequence: n must be positive");

  const auto& s = base.support();
  const auto& cum = base.cumulative();
  const std::size_t i_a =
      static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), rparam) - cum.begin());
  const std::size_t i_b = static_cast<std::size_t>(
      std::lower_bound(cum.begin(), cum.end(), 1.0 - rparam) - cum.begin());
  const double a_r = s[i_a];
  const double b_r = s[i_b];
  if (static_cast<double>(n) <= std::max(std::fabs(a_r), std::fabs(b_r))) return base;

  std::vector<double> points{-static_cast<double>(n)};
  std::vector<double> mass{rparam};
  if (i_a < i_b) {
    // CDF rises from rparam to F(a_r) at the window's left edge.
    points.push_back(a_r);
    mass.push_back(std::max(0.0, cum[i_a] - rparam));
    for (std::size_t i = i_a + 1; i < i_b; ++i) {
      points.push_back(s[i]);
      mass.push_back(base.weights()[i]);
    }
  }
  const double left_of_b = i_a < i_b ? cum[i_b - 1] : rparam;
  points.push_back(b_r);
  mass.push_back(std::max(0.0, (1.0 - rparam) - left_of_b));
  points.push_back(static_cast<double>(n));
  mass.push_back(rparam);
  return make_discrete(std::move(points), std::move(mass));
}

// Two-point family with constant mean a whose upper atom wanders off to
// n*a with vanishing mass 1/(2n); the lower atom slides down to a/2, so the
// CDFs converge to the unit step at a/2 while every member keeps first
// absolute moment exactly a. For n = 1 the atoms coincide and merge.
inline DiscreteDistribution mean_escape_sequence(double a, unsigned n) {
  if (!(a > 0.0)) throw std::domain_error("mean_escape_sequence: a must be positive");
  if (n == 0) throw std::domain_error("mean_escape_sequence: n must be positive");
  const double nn = static_cast<double>(n);
  const double small = 1.0 / (2.0 * nn);
  return make_discrete({nn * a / (2.0 * nn - 1.0), nn * a}, {1.0 - small, small});
}

// Largest CDF gap between the n-th member of a sequence and a candidate
// limit, over the grid. Grid points within 1e-9 of a limit atom are dropped
// first: only continuity points of the limit constrain convergence.
inline double weak_convergence_probe(const std::function<DiscreteDistribution(unsigned)>& seq,
                                     const DiscreteDistribution& limit,
                                     const std::vector<double>& grid, unsigned n) {
  std::vector<double> effective;
  effective.reserve(grid.size());
  for (double x : grid) {
    bool nearAtom = false;
    for (double atom : limit.support()) {
      if (std::fabs(x - atom) <= 1e-9) {
        nearAtom = true;
        break;
      }
    }
    if (!nearAtom) effective.push_back(x);
  }
  if (effective.empty()) {
    throw std::invalid_argument("weak_convergence_probe: no grid points clear of the limit atoms");
  }
  const DiscreteDistribution member = seq(n);
  double gap = 0.0;
  for (double x : effective) {
    gap = std::max(gap, std::fabs(cdf(member, x) - cdf(limit, x)));
  }
  return gap;
}

}  // namespace dfnv
