#pragma once
// Single-period stocking rules against demand that is known only through
// moment information: the classical fractile rule for a fully known demand
// law, the Scarf bound and rule for known mean and variance, the extension
// to a mean interval with a variance cap, and brute-force oracles that
// cross-check every closed form.
//
// A note on the rule's coefficient: the minimax order quantity is sometimes
// quoted with s^2/2 (variance) in front of the price ratio term. The
// stationarity condition of the worst-case cost gives s/2 (standard
// deviation), which is what this library implements; minimize_scarf_bound
// provides the numeric argmin that arbitrates the choice, and the test
// suites hold the closed form to it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dfnv/discrete_distribution.hpp"
#include "dfnv/moment_sets.hpp"
#include "dfnv/rng.hpp"

namespace dfnv {

// Unit prices with the ordering p > c > q >= 0.
struct PriceParams {
  double p;  // selling price
  double c;  // purchase cost
  double q;  // salvage value

  PriceParams(double p_, double c_, double q_) : p(p_), c(c_), q(q_) {
    if (!(std::isfinite(p) && std::isfinite(c) && std::isfinite(q)) ||
        !(p > c && c > q && q >= 0.0)) {
      throw std::invalid_argument("price ordering violated: need p > c > q >= 0");
    }
  }

  // Critical fractile (p - c) / (p - q), always in (0, 1).
  double fractile() const { return (p - c) / (p - q); }
};

// Demand described only by a mean interval [a, b] and a variance cap d2.
struct MomentEnvelope {
  double a;
  double b;
  double d2;

  MomentEnvelope(double a_, double b_, double d2_) : a(a_), b(b_), d2(d2_) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(d2)) ||
        !(a > 0.0 && a <= b && d2 >= 0.0)) {
      throw std::invalid_argument("MomentEnvelope: need 0 < a <= b and d2 >= 0");
    }
  }
};

// The moment class induced by an envelope: base point 0, first absolute
// moment in [a, b], raw second moment capped at d2 + b^2. Lets the envelope
// interoperate with the membership predicates and tail radii.
inline MomentClassSpec to_moment_class(const MomentEnvelope& env) {
  if (!(env.a < env.b)) {
    throw std::invalid_argument("to_moment_class: envelope must have a < b");
  }
  return MomentClassSpec(0.0, env.a, env.b, 1.0, env.d2 + env.b * env.b);
}

namespace detail {
inline void require_nonnegative_demand(const DiscreteDistribution& demand) {
  if (demand.support().front() < 0.0) {
    throw std::domain_error("demand distribution must be supported on [0, inf)");
  }
}
inline void require_nonnegative_order(double x) {
  if (!(x >= 0.0)) throw std::domain_error("order quantity must be nonnegative");
}
}  // namespace detail

// Expected reward of stocking x: p E min(x, W) + q E max(x - W, 0) - c x.
inline double expected_profit(const PriceParams& pp, double x,
                              const DiscreteDistribution& demand) {
  detail::require_nonnegative_order(x);
  detail::require_nonnegative_demand(demand);
  double acc = 0.0;
  for (std::size_t i = 0; i < demand.size(); ++i) {
    const double w = demand.support()[i];
    acc += demand.weights()[i] * (pp.p * std::min(x, w) + pp.q * std::max(x - w, 0.0));
  }
  return acc - pp.c * x;
}

// Expected cost (c - q) x + (p - q) E max(W - x, 0). Profit and cost are two
// sides of the same objective: profit = (p - q) mean - cost.
inline double expected_cost(const PriceParams& pp, double x,
                            const DiscreteDistribution& demand) {
  detail::require_nonnegative_order(x);
  detail::require_nonnegative_demand(demand);
  return (pp.c - pp.q) * x + (pp.p - pp.q) * expected_excess(demand, x);
}

// Profit-maximizing order for a fully known demand law: the demand quantile
// at the critical fractile.
inline double classical_optimal(const PriceParams& pp, const DiscreteDistribution& demand) {
  detail::require_nonnegative_demand(demand);
  return quantile(demand, pp.fractile());
}

// Upper bound on E max(W - x, 0) over all laws with mean m and variance s2:
//   (1/2) (sqrt(s2 + (x - m)^2) - (x - m)).
inline double excess_upper_bound(double x, double m, double s2) {
  if (!(s2 >= 0.0)) throw std::domain_error("excess_upper_bound: s2 must be nonnegative");
  const double dm = x - m;
  return 0.5 * (std::sqrt(s2 + dm * dm) - dm);
}

// The unique two-point law with mean m and variance s2 attaining
// excess_upper_bound at x. Atoms sit at x -+ D with D = sqrt(s2 + (x-m)^2);
// when D = 0 the law degenerates to a point mass at m. The lower atom can
// fall below zero; callers that need nonnegative support must check
// (e.g. via ScarfSolution::support_warning), the law itself is returned
// unadjusted.
inline DiscreteDistribution worst_case_two_point(double x, double m, double s2) {
  if (!(s2 >= 0.0)) throw std::domain_error("worst_case_two_point: s2 must be nonnegative");
  const double dm = x - m;
  const double D = std::sqrt(s2 + dm * dm);
  if (D == 0.0) return delta(m);
  const double tilt = std::clamp((m - x) / D, -1.0, 1.0);
  return make_discrete({x - D, x + D}, {0.5 * (1.0 - tilt), 0.5 * (1.0 + tilt)});
}

// Worst-case expected cost of stocking x against mean m and variance s2:
//   (c - q) x + ((p - q)/2) (sqrt(s2 + (x - m)^2) - (x - m)).
// Convex in x, nondecreasing in both m and s2.
inline double scarf_bound(const PriceParams& pp, double x, double m, double s2) {
  const double dm = x - m;
  return (pp.c - pp.q) * x + 0.5 * (pp.p - pp.q) * (std::sqrt(s2 + dm * dm) - dm);
}

struct ScarfSolution {
  double x_star;
  double value;                    // worst-case cost at x_star
  DiscreteDistribution worst_dist; // two-point attainer at x_star
  bool clamped;                    // closed form was negative, clamped to 0
  bool support_warning;            // attainer's lower atom is negative
};

// Minimax order for known mean and variance:
//   x* = max(0, m + (s/2) (sqrt((p-c)/(c-q)) - sqrt((c-q)/(p-c)))).
inline ScarfSolution scarf_rule(const PriceParams& pp, double m, double s2) {
  if (!(m > 0.0)) throw std::domain_error("scarf_rule: m must be positive");
  if (!(s2 >= 0.0)) throw std::domain_error("scarf_rule: s2 must be nonnegative");
  const double k = std::sqrt((pp.p - pp.c) / (pp.c - pp.q));
  const double raw = m + 0.5 * std::sqrt(s2) * (k - 1.0 / k);
  const bool clamped = raw < 0.0;
  const double x = clamped ? 0.0 : raw;
  const double dm = x - m;
  const double lower_atom = x - std::sqrt(s2 + dm * dm);
  return ScarfSolution{x, scarf_bound(pp, x, m, s2), worst_case_two_point(x, m, s2),
                       clamped, lower_atom < 0.0};
}

struct BoundMinimum {
  double x = 0.0;
  double value = 0.0;
};

// Numeric argmin of x -> scarf_bound(x, m, s2) over
// [0, m + 10 (sqrt(s2) + 1) max(sqrt((p-c)/(c-q)), 1)]. A golden-section
// pass narrows the bracket to width 1e-10; because values near the minimum
// agree to rounding, pure value comparisons can drift off the minimizer by
// about sqrt(eps) of the scale, so a sign bisection of the extended-precision
// central difference f(x+h) - f(x-h) then pins the stationary point. The
// bound's slope tends to c - q > 0, so the wide bracket always contains the
// minimum; both ends are checked against the returned point before reporting.
inline BoundMinimum minimize_scarf_bound(const PriceParams& pp, double m, double s2) {
  if (!(s2 >= 0.0)) throw std::domain_error("minimize_scarf_bound: s2 must be nonnegative");
  const double k = std::sqrt((pp.p - pp.c) / (pp.c - pp.q));
  const double hi0 = m + 10.0 * (std::sqrt(s2) + 1.0) * std::max(k, 1.0);
  auto f = [&](double x) { return scarf_bound(pp, x, m, s2); };

  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0, hi = hi0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int iter = 0; iter < 400 && hi - lo > 1e-10; ++iter) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    }
  }
  double xm = 0.5 * (lo + hi);

  const long double cq = static_cast<long double>(pp.c) - pp.q;
  const long double pq = static_cast<long double>(pp.p) - pp.q;
  auto fl = [&](double x) {
    const long double dm = static_cast<long double>(x) - m;
    return cq * x + 0.5L * pq * (sqrtl(static_cast<long double>(s2) + dm * dm) - dm);
  };
  // h rides the curvature scale sqrt(s2); the tiny floor keeps the bias
  // h*|slope asymmetry| negligible at the s2 = 0 kink, where the difference
  // signal is sharp enough that no larger step is needed.
  const double h = std::max(1e-5 * std::sqrt(s2), 1e-10);
  auto rising = [&](double x) { return fl(x + h) - fl(x - h) >= 0.0L; };
  const double width = 1e-2 * (1.0 + std::sqrt(s2));
  double plo = std::max(0.0, xm - width);
  double phi = std::min(hi0, xm + width);
  if (rising(plo)) {
    xm = plo;  // minimizer at the left edge; in particular the x = 0 clamp
  } else if (!rising(phi)) {
    xm = phi;
  } else {
    for (int iter = 0; iter < 200 && phi - plo > 1e-12; ++iter) {
      const double mid = 0.5 * (plo + phi);
      (rising(mid) ? phi : plo) = mid;
    }
    xm = 0.5 * (plo + phi);
  }

  const double vm = f(xm);
  if (f(0.0) < vm - 1e-9 || f(hi0) < vm - 1e-9) {
    throw std::logic_error("minimize_scarf_bound: bracket did not contain the minimum");
  }
  return {xm, vm};
}

// Minimax order against a moment envelope. The worst-case cost over the
// envelope equals the worst-case cost at its top corner (b, d2) -- the
// bound is nondecreasing in both mean and variance -- so the problem
// reduces to scarf_rule at that corner.
inline ScarfSolution extended_scarf(const PriceParams& pp, const MomentEnvelope& env) {
  return scarf_rule(pp, env.b, env.d2);
}

struct MomentSweep {
  double mean = 0.0;  // argmax over the swept region
  double s2 = 0.0;
  double value = 0.0;
  bool corner_dominates = false;  // value at (b, d2) >= every swept value - 1e-12
};

// Evaluates the worst-case cost bound on a grid over the moment rectangle
// [a, b] x [0, d2] and reports whether the corner (b, d2) dominates. Ties
// keep the first grid point visited (row-major in mean, then s2).
inline MomentSweep rectangle_sup_check(const PriceParams& pp, double x,
                                       const MomentEnvelope& env, int grid_n) {
  if (grid_n < 2) throw std::invalid_argument("rectangle_sup_check: grid_n must be at least 2");
  detail::require_nonnegative_order(x);
  MomentSweep out;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_n; ++i) {
    const double m =
        i == grid_n - 1 ? env.b : env.a + (env.b - env.a) * i / (grid_n - 1);
    for (int j = 0; j < grid_n; ++j) {
      const double s2 = j == grid_n - 1 ? env.d2 : env.d2 * j / (grid_n - 1);
      const double v = scarf_bound(pp, x, m, s2);
      if (v > best) {
        best = v;
        out.mean = m;
        out.s2 = s2;
      }
    }
  }
  out.value = best;
  out.corner_dominates = scarf_bound(pp, x, env.b, env.d2) >= best - 1e-12;
  return out;
}

// Same sweep over the full moment region the envelope's class actually
// permits: mean in [a, b], variance up to d2 + b^2 - mean^2, which exceeds
// d2 away from the top mean. Reports whether (b, d2) still dominates; no
// particular outcome is promised.
inline MomentSweep feasible_region_sup_check(const PriceParams& pp, double x,
                                             const MomentEnvelope& env, int grid_n) {
  if (grid_n < 2) {
    throw std::invalid_argument("feasible_region_sup_check: grid_n must be at least 2");
  }
  detail::require_nonnegative_order(x);
  MomentSweep out;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_n; ++i) {
    const double m =
        i == grid_n - 1 ? env.b : env.a + (env.b - env.a) * i / (grid_n - 1);
    const double cap = env.d2 + env.b * env.b - m * m;
    for (int j = 0; j < grid_n; ++j) {
      const double s2 = j == grid_n - 1 ? cap : cap * j / (grid_n - 1);
      const double v = scarf_bound(pp, x, m, s2);
      if (v > best) {
        best = v;
        out.mean = m;
        out.s2 = s2;
      }
    }
  }
  out.value = best;
  out.corner_dominates = scarf_bound(pp, x, env.b, env.d2) >= best - 1e-12;
  return out;
}

// The member of the two-point family with mean m, variance s2 and the given
// lower atom; the upper atom and weights are then forced:
//   upper = m + s2 / (m - lower),  P(upper) = (m - lower) / (upper - lower).
inline DiscreteDistribution two_point_family_member(double m, double s2, double lower) {
  if (!(s2 > 0.0)) throw std::domain_error("two_point_family_member: s2 must be positive");
  if (!(lower < m)) throw std::domain_error("two_point_family_member: lower atom must sit below the mean");
  const double upper = m + s2 / (m - lower);
  const double upper_weight = (m - lower) / (upper - lower);
  return make_discrete({lower, upper}, {1.0 - upper_weight, upper_weight});
}

struct SweepResult {
  DiscreteDistribution best_dist;
  double best_cost;
};

// Worst cost over the two-point family with the lower atom swept across a
// grid_n-point grid in [0, m). Every candidate is moment-checked to 1e-10
// before costing. The maximum over the whole family approaches the bound
// from below as the grid refines, whenever the attaining lower atom x - D
// is nonnegative.
inline SweepResult two_point_sweep_oracle(const PriceParams& pp, double x, double m,
                                          double s2, int grid_n) {
  if (grid_n < 10) throw std::invalid_argument("two_point_sweep_oracle: grid_n must be at least 10");
  if (!(m > 0.0)) throw std::domain_error("two_point_sweep_oracle: m must be positive");
  if (!(s2 > 0.0)) throw std::domain_error("two_point_sweep_oracle: s2 must be positive");
  detail::require_nonnegative_order(x);
  double best = -std::numeric_limits<double>::infinity();
  double best_lower = 0.0;
  bool found = false;
  for (int i = 0; i < grid_n; ++i) {
    const double lower = m * i / grid_n;
    const DiscreteDistribution cand = two_point_family_member(m, s2, lower);
    const Moments mom = moments(cand);
    if (std::fabs(mom.mean - m) > 1e-10 || std::fabs(mom.variance - s2) > 1e-10) continue;
    const double cost = expected_cost(pp, x, cand);
    if (cost > best) {
      best = cost;
      best_lower = lower;
      found = true;
    }
  }
  if (!found) throw std::logic_error("two_point_sweep_oracle: no grid candidate passed the moment check");
  return SweepResult{two_point_family_member(m, s2, best_lower), best};
}

// Randomized probe of the cost bound: seeded mixtures of two-point family
// members (mixing preserves mean and variance) are costed at x and compared
// against scarf_bound. Returns the largest observed excess over the bound;
// a correct bound keeps it at rounding level.
inline double random_member_oracle(const PriceParams& pp, double x, double m, double s2,
                                   int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("random_member_oracle: trials must be positive");
  if (!(m > 0.0)) throw std::domain_error("random_member_oracle: m must be positive");
  if (!(s2 > 0.0)) throw std::domain_error("random_member_oracle: s2 must be positive");
  detail::require_nonnegative_order(x);
  Rng rng(seed);
  const double bound = scarf_bound(pp, x, m, s2);
  double worst = -std::numeric_limits<double>::infinity();
  std::vector<DiscreteDistribution> parts;
  std::vector<double> alphas;
  for (int t = 0; t < trials; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng.below(4));
    parts.clear();
    alphas.clear();
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      // keep the lower atom away from m so the forced upper atom stays tame
      parts.push_back(two_point_family_member(m, s2, rng.uniform(0.0, m * 0.999)));
      const double u = rng.uniform(0.05, 1.0);
      alphas.push_back(u);
      total += u;
    }
    for (double& u : alphas) u /= total;
    const double cost = expected_cost(pp, x, mix(parts, alphas));
    worst = std::max(worst, cost - bound);
  }
  return worst;
}

}  // namespace dfnv
