#pragma once
// Kolmogorov, Levy and Prokhorov distances between finitely supported
// distributions on the real line, plus an exhaustive subset oracle for the
// Prokhorov distance.
//
// Convention: the Prokhorov feasibility predicate fattens sets with the
// closed condition |x - y| <= eps. On finite supports the minimum is
// attained under this convention, and the flow-based distance and the
// subset oracle share it, so the two select identical candidates. The
// open/closed choice can only move the result across exact ties in the
// candidate set.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dfnv/discrete_distribution.hpp"

namespace dfnv {

struct MetricResult {
  double value = 0.0;
  // Prokhorov: the optimal coupling. Levy: a witness point where the band
  // condition fails just below the returned value.
  std::optional<std::string> certificate;
};

// --- Kolmogorov -----------------------------------------------------------

// Exact sup-norm distance between the CDFs, evaluated at every union atom
// and at its left limit.
inline MetricResult kolmogorov(const DiscreteDistribution& mu,
                               const DiscreteDistribution& lam) {
  double best = 0.0;
  auto consider = [&](double x) {
    best = std::max(best, std::fabs(cdf(mu, x) - cdf(lam, x)));
    best = std::max(best, std::fabs(cdf_left(mu, x) - cdf_left(lam, x)));
  };
  for (double s : mu.support()) consider(s);
  for (double s : lam.support()) consider(s);
  return {best, std::nullopt};
}

// --- Levy -----------------------------------------------------------------

// A point x where the eps-band condition
//   F_mu(x - eps) - eps <= F_lam(x) <= F_mu(x + eps) + eps
// fails, or nullopt if it holds everywhere. All three step functions only
// change at atoms of either support shifted by -eps, 0 or +eps, so checking
// those points and their left limits is exhaustive.
inline std::optional<double> levy_violation(const DiscreteDistribution& mu,
                                            const DiscreteDistribution& lam,
                                            double eps) {
  constexpr double kSlack = 1e-15;
  std::vector<double> crit;
  crit.reserve(3 * (mu.size() + lam.size()));
  auto push = [&](double s) {
    crit.push_back(s);
    crit.push_back(s - eps);
    crit.push_back(s + eps);
  };
  for (double s : mu.support()) push(s);
  for (double s : lam.support()) push(s);
  for (double t : crit) {
    if (cdf(mu, t - eps) - eps > cdf(lam, t) + kSlack) return t;
    if (cdf(lam, t) > cdf(mu, t + eps) + eps + kSlack) return t;
    if (cdf_left(mu, t - eps) - eps > cdf_left(lam, t) + kSlack) return t;
    if (cdf_left(lam, t) > cdf_left(mu, t + eps) + eps + kSlack) return t;
  }
  return std::nullopt;
}

// Levy distance by bisection on the band width over [0, 1]; the returned
// value is feasible and within 1e-12 of the infimum.
inline MetricResult levy(const DiscreteDistribution& mu,
                         const DiscreteDistribution& lam) {
  if (!levy_violation(mu, lam, 0.0)) return {0.0, std::nullopt};
  double lo = 0.0;
  double hi = 1.0;  // the unit band always holds
  std::optional<double> witness;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (auto v = levy_violation(mu, lam, mid)) {
      lo = mid;
      witness = *v;
    } else {
      hi = mid;
    }
  }
  MetricResult r{hi, std::nullopt};
  if (witness) {
    std::ostringstream os;
    os << "band of width " << lo << " fails near x=" << *witness;
    r.certificate = os.str();
  }
  return r;
}

// --- Prokhorov ------------------------------------------------------------

namespace detail {

// Dinic max-flow; capacities are real weights, so residuals below 1e-13 are
// treated as saturated. The instance keeps its state across run() calls,
// which lets callers add edges and continue augmenting.
class MaxFlow {
 public:
  struct Edge {
    int to;
    double cap;  // remaining capacity
    int rev;
  };

  explicit MaxFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  void add_edge(int from, int to, double cap) {
    adj_[static_cast<std::size_t>(from)].push_back(
        {to, cap, static_cast<int>(adj_[static_cast<std::size_t>(to)].size())});
    adj_[static_cast<std::size_t>(to)].push_back(
        {from, 0.0, static_cast<int>(adj_[static_cast<std::size_t>(from)].size()) - 1});
  }

  // Augments as far as possible and returns the additional flow pushed.
  double run(int source, int sink) {
    double pushed = 0.0;
    while (bfs_levels(source, sink)) {
      iter_.assign(adj_.size(), 0);
      while (true) {
        const double f = dfs_push(source, sink, std::numeric_limits<double>::infinity());
        if (f <= 0.0) break;
        pushed += f;
      }
    }
    return pushed;
  }

  // Flow currently carried from `from` along its k-th outgoing edge.
  double edge_flow(int from, std::size_t k) const {
    const Edge& e = adj_[static_cast<std::size_t>(from)][k];
    return adj_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap;
  }

 private:
  static constexpr double kEps = 1e-13;

  bool bfs_levels(int s, int t) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const Edge& e : adj_[static_cast<std::size_t>(v)]) {
        if (e.cap > kEps && level_[static_cast<std::size_t>(e.to)] < 0) {
          level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  double dfs_push(int v, int t, double limit) {
    if (v == t) return limit;
    for (int& i = iter_[static_cast<std::size_t>(v)];
         i < static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); ++i) {
      Edge& e = adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
      if (e.cap <= kEps) continue;
      if (level_[static_cast<std::size_t>(e.to)] != level_[static_cast<std::size_t>(v)] + 1) continue;
      const double f = dfs_push(e.to, t, std::min(limit, e.cap));
      if (f > 0.0) {
        e.cap -= f;
        adj_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap += f;
        return f;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

// Transport network between the two atom sets. Nodes: 0 source, 1..n the mu
// atoms, n+1..n+m the lam atoms, n+m+1 sink.
struct Transport {
  Transport(const DiscreteDistribution& mu, const DiscreteDistribution& lam)
      : n(static_cast<int>(mu.size())),
        m(static_cast<int>(lam.size())),
        flow(n + m + 2),
        total(0.0) {
    for (int i = 0; i < n; ++i) flow.add_edge(0, 1 + i, mu.weights()[static_cast<std::size_t>(i)]);
    for (int j = 0; j < m; ++j)
      flow.add_edge(1 + n + j, n + m + 1, lam.weights()[static_cast<std::size_t>(j)]);
  }

  void link(int i, int j) { flow.add_edge(1 + i, 1 + n + j, 2.0); }
  void augment() { total += flow.run(0, n + m + 1); }

  int n, m;
  MaxFlow flow;
  double total;
};

// Pairwise distances grouped by value, ascending.
inline std::vector<std::pair<double, std::vector<std::pair<int, int>>>> distance_groups(
    const DiscreteDistribution& mu, const DiscreteDistribution& lam) {
  std::vector<std::pair<double, std::pair<int, int>>> flat;
  flat.reserve(mu.size() * lam.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < lam.size(); ++j) {
      flat.emplace_back(std::fabs(mu.support()[i] - lam.support()[j]),
                        std::make_pair(static_cast<int>(i), static_cast<int>(j)));
    }
  }
  std::sort(flat.begin(), flat.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<double, std::vector<std::pair<int, int>>>> groups;
  for (const auto& [d, pair] : flat) {
    if (groups.empty() || groups.back().first != d) groups.push_back({d, {}});
    groups.back().second.push_back(pair);
  }
  return groups;
}

// 1 - (largest mass a coupling can place on pairs with |x - y| <= eps).
inline double transport_deficit(const DiscreteDistribution& mu,
                                const DiscreteDistribution& lam, double eps) {
  Transport t(mu, lam);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < lam.size(); ++j) {
      if (std::fabs(mu.support()[i] - lam.support()[j]) <= eps) {
        t.link(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  t.augment();
  return 1.0 - t.total;
}

inline std::string coupling_certificate(const DiscreteDistribution& mu,
                                        const DiscreteDistribution& lam, double eps) {
  Transport t(mu, lam);
  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < lam.size(); ++j) {
      if (std::fabs(mu.support()[i] - lam.support()[j]) <= eps) {
        t.link(static_cast<int>(i), static_cast<int>(j));
        links.emplace_back(i, j);
      }
    }
  }
  t.augment();
  std::ostringstream os;
  os << "coupling at eps=" << eps << ":";
  std::size_t emitted = 0;
  // Each mu node's edge 0 is the residual towards the source; link edges
  // follow in insertion order.
  std::vector<std::size_t> cursor(mu.size(), 1);
  for (const auto& [i, j] : links) {
    const double f = t.flow.edge_flow(1 + static_cast<int>(i), cursor[i]++);
    if (f > 1e-15) {
      if (emitted == 48) {
        os << " ...";
        break;
      }
      os << ' ' << mu.support()[i] << "->" << lam.support()[j] << ":" << f << ";";
      ++emitted;
    }
  }
  os << " unmatched=" << 1.0 - t.total;
  return os.str();
}

}  // namespace detail

// Candidate values for the Prokhorov distance: every pairwise atom distance
// together with the unmatched-mass level achievable once all pairs up to
// that distance may be coupled. The optimum always lies in this set.
inline std::vector<double> prokhorov_candidates(const DiscreteDistribution& mu,
                                                const DiscreteDistribution& lam) {
  auto groups = detail::distance_groups(mu, lam);
  std::vector<double> cands;
  cands.reserve(2 * groups.size() + 1);
  detail::Transport t(mu, lam);
  t.augment();
  cands.push_back(1.0 - t.total);  // nothing coupled yet: deficit 1
  for (const auto& [d, pairs] : groups) {
    cands.push_back(d);
    for (const auto& [i, j] : pairs) t.link(i, j);
    t.augment();
    cands.push_back(1.0 - t.total);
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  return cands;
}

// Prokhorov distance. Feasibility of a width eps is decided by max flow on
// the bipartite transport graph restricted to pairs with |x - y| <= eps:
// eps is feasible iff the routable mass is at least 1 - eps. The smallest
// feasible member of prokhorov_candidates() is located by binary search;
// when the candidate table would be large, an equivalent scan over the
// distance thresholds selects the same candidate with O(log) flow
// computations (its deficit value re-derived by a fresh flow, so equal up
// to summation order at the last ulp).
inline MetricResult prokhorov(const DiscreteDistribution& mu,
                              const DiscreteDistribution& lam) {
  constexpr double kTol = 1e-12;
  double value = 1.0;
  auto groups = detail::distance_groups(mu, lam);
  if (groups.size() <= 3000) {
    const std::vector<double> cands = prokhorov_candidates(mu, lam);
    std::size_t lo = 0;
    std::size_t hi = cands.size() - 1;  // the largest candidate is feasible
    auto feasible = [&](double eps) {
      return detail::transport_deficit(mu, lam, eps) <= eps + kTol;
    };
    if (feasible(cands[0])) {
      value = cands[0];
    } else {
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(cands[mid])) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      value = cands[hi];
    }
  } else {
    // Blocks of eps between consecutive distance thresholds share one edge
    // set, hence one deficit. The first block whose deficit lies below its
    // right end contains the optimum max(block start, deficit).
    const std::size_t K = groups.size();
    auto block_lo = [&](std::size_t k) { return k == 0 ? 0.0 : groups[k - 1].first; };
    auto block_hi = [&](std::size_t k) {
      return k < K ? groups[k].first : std::numeric_limits<double>::infinity();
    };
    auto deficit = [&](std::size_t k) {
      return detail::transport_deficit(mu, lam, block_lo(k));
    };
    std::size_t lo = 0, hi = K;  // final block always qualifies: deficit 0
    double f_hi = 0.0;
    if (double f0 = deficit(0); f0 - kTol < block_hi(0)) {
      hi = 0;
      f_hi = f0;
    } else {
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const double f = deficit(mid);
        if (f - kTol < block_hi(mid)) {
          hi = mid;
          f_hi = f;
        } else {
          lo = mid;
        }
      }
      if (hi == K) f_hi = deficit(K);
    }
    value = std::max(block_lo(hi), f_hi);
  }
  return {value, detail::coupling_certificate(mu, lam, value)};
}

// Exhaustive oracle: decides each candidate eps by testing
//   mu(A) <= lam(A^eps) + eps
// over every union A of mu atoms (and with the roles swapped), where A^eps
// is the closed eps-fattening. Returns the smallest feasible candidate.
inline MetricResult prokhorov_bruteforce(const DiscreteDistribution& mu,
                                         const DiscreteDistribution& lam) {
  const std::size_t n = mu.size();
  const std::size_t m = lam.size();
  if (n > 15 || m > 15) {
    throw std::invalid_argument("prokhorov_bruteforce: supports may have at most 15 atoms");
  }
  constexpr double kTol = 1e-12;

  // Subset mass tables over both atom sets.
  auto mass_table = [](const DiscreteDistribution& d) {
    const std::size_t size = d.size();
    std::vector<double> table(std::size_t{1} << size, 0.0);
    for (std::uint32_t mask = 1; mask < table.size(); ++mask) {
      const std::uint32_t low = mask & (~mask + 1);
      const int bit = std::countr_zero(low);
      table[mask] = table[mask ^ low] + d.weights()[static_cast<std::size_t>(bit)];
    }
    return table;
  };
  const std::vector<double> mu_mass = mass_table(mu);
  const std::vector<double> lam_mass = mass_table(lam);

  std::vector<std::uint32_t> cover(std::max(mu_mass.size(), lam_mass.size()));
  auto one_sided_ok = [&](const DiscreteDistribution& a, const std::vector<double>& a_mass,
                          const DiscreteDistribution& b, const std::vector<double>& b_mass,
                          double eps) {
    const std::size_t na = a.size();
    std::vector<std::uint32_t> atom_cover(na, 0);
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (std::fabs(a.support()[i] - b.support()[j]) <= eps) {
          atom_cover[i] |= std::uint32_t{1} << j;
        }
      }
    }
    cover[0] = 0;
    const std::uint32_t limit = std::uint32_t{1} << na;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
      const std::uint32_t low = mask & (~mask + 1);
      const int bit = std::countr_zero(low);
      cover[mask] = cover[mask ^ low] | atom_cover[static_cast<std::size_t>(bit)];
      if (a_mass[mask] > b_mass[cover[mask]] + eps + kTol) return false;
    }
    return true;
  };

  for (double eps : prokhorov_candidates(mu, lam)) {
    if (one_sided_ok(mu, mu_mass, lam, lam_mass, eps) &&
        one_sided_ok(lam, lam_mass, mu, mu_mass, eps)) {
      return {eps, std::nullopt};
    }
  }
  return {1.0, std::nullopt};  // eps = 1 is always a feasible candidate
}

}  // namespace dfnv
