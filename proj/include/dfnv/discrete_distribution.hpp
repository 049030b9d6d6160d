#pragma once
// Finitely supported probability distributions on the real line: sorted
// atoms with positive weights summing to one. All operations are pure and
// the objects are immutable after construction, so values can be shared
// freely across threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dfnv {

class DiscreteDistribution {
 public:
  // Atom locations, strictly increasing.
  const std::vector<double>& support() const { return support_; }
  // Atom masses, all positive, total within 1e-9 of one.
  const std::vector<double>& weights() const { return weights_; }
  // Running totals of weights(); cumulative().back() is pinned to 1.0.
  const std::vector<double>& cumulative() const { return cumulative_; }
  std::size_t size() const { return support_.size(); }

  friend DiscreteDistribution make_discrete(std::vector<double> points,
                                            std::vector<double> weights);

 private:
  DiscreteDistribution() = default;

  std::vector<double> support_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

// Builds a distribution from raw atom/weight lists. Duplicate atoms are
// merged (weights added), zero-weight atoms dropped, and the weights
// renormalized to total mass one. Weights already within 1e-9 of unit total
// are kept verbatim so that decimal weights survive file round-trips
// bit-identically.
inline DiscreteDistribution make_discrete(std::vector<double> points,
                                          std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw std::invalid_argument(
        "make_discrete: points and weights must be nonempty lists of equal length");
  }
  for (double x : points) {
    if (!std::isfinite(x)) throw std::invalid_argument("make_discrete: non-finite support point");
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("make_discrete: weights must be finite and nonnegative");
    }
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return points[i] < points[j]; });

  std::vector<double> support;
  std::vector<double> mass;
  support.reserve(points.size());
  mass.reserve(points.size());
  for (std::size_t idx : order) {
    if (!support.empty() && support.back() == points[idx]) {
      mass.back() += weights[idx];
    } else {
      support.push_back(points[idx]);
      mass.push_back(weights[idx]);
    }
  }

  std::vector<double> s2;
  std::vector<double> w2;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (mass[i] > 0.0) {
      s2.push_back(support[i]);
      w2.push_back(mass[i]);
    }
  }
  double total = std::accumulate(w2.begin(), w2.end(), 0.0);
  if (!(total > 0.0)) {
    throw std::invalid_argument("make_discrete: total weight must be positive");
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    for (double& w : w2) w /= total;
  }

  DiscreteDistribution d;
  d.support_ = std::move(s2);
  d.weights_ = std::move(w2);
  d.cumulative_.resize(d.weights_.size());
  std::partial_sum(d.weights_.begin(), d.weights_.end(), d.cumulative_.begin());
  d.cumulative_.back() = 1.0;
  return d;
}

// Point mass at x.
inline DiscreteDistribution delta(double x) { return make_discrete({x}, {1.0}); }

// Right-continuous distribution function: mass of atoms <= x.
inline double cdf(const DiscreteDistribution& d, double x) {
  const auto& s = d.support();
  auto it = std::upper_bound(s.begin(), s.end(), x);
  if (it == s.begin()) return 0.0;
  return d.cumulative()[static_cast<std::size_t>(it - s.begin()) - 1];
}

// Left limit of the CDF: mass of atoms strictly below x.
inline double cdf_left(const DiscreteDistribution& d, double x) {
  const auto& s = d.support();
  auto it = std::lower_bound(s.begin(), s.end(), x);
  if (it == s.begin()) return 0.0;
  return d.cumulative()[static_cast<std::size_t>(it - s.begin()) - 1];
}

// Generalized inverse inf{x : F(x) >= tau}; always one of the atoms.
inline double quantile(const DiscreteDistribution& d, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::domain_error("quantile: tau must lie in (0, 1]");
  }
  const auto& cum = d.cumulative();
  auto it = std::lower_bound(cum.begin(), cum.end(), tau);
  return d.support()[static_cast<std::size_t>(it - cum.begin())];
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Mean and variance. The variance is accumulated about the mean, which keeps
// it nonnegative up to rounding; anything the cancellation drives below zero
// is clamped to zero.
inline Moments moments(const DiscreteDistribution& d) {
  const auto& s = d.support();
  const auto& w = d.weights();
  double mean = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) mean += w[i] * s[i];
  double var = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dx = s[i] - mean;
    var += w[i] * dx * dx;
  }
  return {mean, std::max(0.0, var)};
}

// Absolute moment of the given order about x0: sum w_i |x_i - x0|^order.
inline double abs_moment(const DiscreteDistribution& d, double x0, double order) {
  const auto& s = d.support();
  const auto& w = d.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double y = std::fabs(s[i] - x0);
    if (order == 1.0) {
      acc += w[i] * y;
    } else if (order == 2.0) {
      acc += w[i] * y * y;
    } else {
      acc += w[i] * std::pow(y, order);
    }
  }
  return acc;
}

// E max(W - x, 0); nonincreasing and convex in x.
inline double expected_excess(const DiscreteDistribution& d, double x) {
  const auto& s = d.support();
  const auto& w = d.weights();
  double acc = 0.0;
  for (std::size_t i = s.size(); i-- > 0;) {
    if (s[i] <= x) break;
    acc += w[i] * (s[i] - x);
  }
  return acc;
}

// Finite mixture: atoms unioned, weights scaled by the component
// probabilities. Components sharing (mean, variance) mix to the same
// (mean, variance).
inline DiscreteDistribution mix(const std::vector<DiscreteDistribution>& components,
                                const std::vector<double>& probabilities) {
  if (components.empty() || components.size() != probabilities.size()) {
    throw std::invalid_argument("mix: need equally many components and probabilities");
  }
  double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (std::fabs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("mix: probabilities must sum to 1");
  }
  std::vector<double> points;
  std::vector<double> weights;
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (probabilities[k] < 0.0) throw std::invalid_argument("mix: negative probability");
    const auto& s = components[k].support();
    const auto& w = components[k].weights();
    for (std::size_t i = 0; i < s.size(); ++i) {
      points.push_back(s[i]);
      weights.push_back(probabilities[k] * w[i]);
    }
  }
  return make_discrete(std::move(points), std::move(weights));
}

}  // namespace dfnv
