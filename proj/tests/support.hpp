#pragma once

// Test-only oracles and statistics helpers. Nothing here calls into the oracle module.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "collision_census/topology.hpp"

namespace census::testing {

/// Exact m-step law by enumerating every neighbor path (weights multiply 1/deg).
inline std::map<Node, double> enumerate_paths(const Topology& t, Node start, int m) {
  std::map<Node, double> law;
  std::function<void(Node, int, double)> walk = [&](Node v, int left, double weight) {
    if (left == 0) {
      law[v] += weight;
      return;
    }
    const auto nbrs = t.neighbors(v);
    for (const Node w : nbrs) walk(w, left - 1, weight / static_cast<double>(nbrs.size()));
  };
  walk(start, m, 1.0);
  return law;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Pair re-collision on the k-cube: sum_i C(k,i) 2^-k ((2i - k)/k)^(2m).
inline double hypercube_recollision(int k, int m) {
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) sum += binomial(k, i) / std::ldexp(1.0, k) * std::pow((2.0 * i - k) / k, 2 * m);
  return sum;
}

/// Single-walk return probability on an infinite line: C(m, m/2) / 2^m.
inline double line_return(int m) { return m % 2 ? 0.0 : binomial(m, m / 2) / std::ldexp(1.0, m); }

/// Least-squares slope of y on x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct MeanSe {
  double mean = 0;
  double se = 0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double s = 0, ss = 0;
  for (const double x : xs) s += x;
  const double mean = s / n;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

inline double chi_square(const std::vector<std::int64_t>& observed, const std::vector<double>& expected) {
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = static_cast<double>(observed[i]) - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

/// Moebius ladder on 8 vertices: cycle plus antipodal chords; 3-regular, non-bipartite.
inline Topology wagner_graph() {
  std::vector<std::vector<Node>> adj(8);
  for (Node v = 0; v < 8; ++v) adj[v] = {(v + 1) % 8, (v + 7) % 8, (v + 4) % 8};
  return Topology::from_adjacency(adj);
}

}  // namespace census::testing
