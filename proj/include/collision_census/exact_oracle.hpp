#pragma once

// Exact single-walk laws by repeated sparse transition products. Header-only and
// templated on the scalar so the same code runs in double or long double.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "collision_census/error.hpp"
#include "collision_census/topology.hpp"

namespace census {

inline constexpr std::int64_t kOracleGuard = 4096;

template <typename Scalar>
using ProbabilityVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Law of one walk after `step` steps. Entries are >= 0 and sum to 1 up to rounding.
template <typename Scalar = double>
struct DistributionVector {
  ProbabilityVector<Scalar> probabilities;
  int step = 0;
};

inline void check_oracle_size(const Topology& topology, std::int64_t guard = kOracleGuard) {
  if (topology.node_count() > guard)
    throw Error(Errc::size_guard, topology.describe() + " exceeds oracle guard A <= " + std::to_string(guard));
}

inline void check_steps(int m) {
  if (m < 0) throw Error(Errc::precondition, "step count must be >= 0");
}

/// Column-stochastic one-step operator: (T p)(j) = sum_{i ~ j} p(i) / deg(i).
template <typename Scalar = double>
class WalkOperator {
 public:
  using Sparse = Eigen::SparseMatrix<Scalar>;

  explicit WalkOperator(const Topology& topology) : topology_(&topology) {
    check_oracle_size(topology);
    const auto n = topology.node_count();
    std::vector<Eigen::Triplet<Scalar>> entries;
    entries.reserve(static_cast<std::size_t>(2 * topology.edge_count()));
    for (Node i = 0; i < n; ++i) {
      const Scalar w = Scalar(1) / Scalar(topology.degree(i));
      for (const Node j : topology.neighbors(i)) entries.emplace_back(j, i, w);
    }
    transition_.resize(n, n);
    transition_.setFromTriplets(entries.begin(), entries.end());
  }

  const Topology& topology() const noexcept { return *topology_; }
  const Sparse& transition() const noexcept { return transition_; }

  ProbabilityVector<Scalar> indicator(Node start) const {
    if (start < 0 || start >= topology_->node_count())
      throw Error(Errc::node_out_of_range, "start node " + std::to_string(start));
    ProbabilityVector<Scalar> p = ProbabilityVector<Scalar>::Zero(topology_->node_count());
    p(start) = Scalar(1);
    return p;
  }

  ProbabilityVector<Scalar> apply(const ProbabilityVector<Scalar>& p) const { return transition_ * p; }

  /// Laws for steps 0..m_max from `start`.
  std::vector<DistributionVector<Scalar>> sequence(Node start, int m_max) const {
    check_steps(m_max);
    std::vector<DistributionVector<Scalar>> out;
    out.reserve(static_cast<std::size_t>(m_max) + 1);
    out.push_back({indicator(start), 0});
    for (int m = 1; m <= m_max; ++m) out.push_back({apply(out.back().probabilities), m});
    return out;
  }

 private:
  const Topology* topology_;
  Sparse transition_;
};

template <typename Scalar = double>
DistributionVector<Scalar> step_distribution(const Topology& topology, Node start, int m) {
  check_steps(m);
  const WalkOperator<Scalar> op(topology);
  DistributionVector<Scalar> d{op.indicator(start), 0};
  for (; d.step < m; ++d.step) d.probabilities = op.apply(d.probabilities);
  return d;
}

/// sum_j d(j)^2 for d the m-step law from start: two independent walks sharing `start`
/// are co-located again after m further steps each.
template <typename Scalar = double>
Scalar exact_recollision(const Topology& topology, Node start, int m) {
  return step_distribution<Scalar>(topology, start, m).probabilities.squaredNorm();
}

template <typename Scalar = double>
std::vector<Scalar> recollision_profile(const Topology& topology, Node start, int m_max) {
  const WalkOperator<Scalar> op(topology);
  std::vector<Scalar> out;
  auto p = op.indicator(start);
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) p = op.apply(p);
    out.push_back(p.squaredNorm());
  }
  return out;
}

/// Probability that a single walk is back at `start` after m steps.
template <typename Scalar = double>
Scalar exact_equalization(const Topology& topology, Node start, int m) {
  return step_distribution<Scalar>(topology, start, m).probabilities(start);
}

template <typename Scalar = double>
std::vector<Scalar> equalization_profile(const Topology& topology, Node start, int m_max) {
  const WalkOperator<Scalar> op(topology);
  std::vector<Scalar> out;
  auto p = op.indicator(start);
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) p = op.apply(p);
    out.push_back(p(start));
  }
  return out;
}

/// ||W^m e_start||^2 with W^m formed densely by repeated squaring. Matches
/// exact_recollision on regular graphs (W symmetric); used as the independent route.
template <typename Scalar = double>
Scalar recollision_by_matrix_power(const Topology& topology, Node start, int m) {
  check_oracle_size(topology, 512);
  check_steps(m);
  if (!topology.is_regular()) throw Error(Errc::irregular_graph, "matrix-power form assumes a regular graph");
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto n = topology.node_count();
  Dense walk = Dense::Zero(n, n);
  for (Node v = 0; v < n; ++v)
    for (const Node w : topology.neighbors(v)) walk(v, w) = Scalar(1) / Scalar(topology.degree(v));
  Dense power = Dense::Identity(n, n);
  Dense base = walk;
  for (int e = m; e > 0; e >>= 1) {
    if (e & 1) power = power * base;
    base = base * base;
  }
  return power.col(start).squaredNorm();
}

/// deg(v) / (2|E|).
template <typename Scalar = double>
ProbabilityVector<Scalar> stationary_distribution(const Topology& topology) {
  check_oracle_size(topology);
  const auto n = topology.node_count();
  ProbabilityVector<Scalar> pi(n);
  const Scalar total = Scalar(2 * topology.edge_count());
  for (Node v = 0; v < n; ++v) pi(v) = Scalar(topology.degree(v)) / total;
  return pi;
}

/// beta(m) = max_{i,j} p(i, j, m) / deg(j) for m = 0..m_max, all starts propagated together.
template <typename Scalar = double>
std::vector<Scalar> degree_weighted_beta_profile(const Topology& topology, int m_max) {
  check_oracle_size(topology);
  check_steps(m_max);
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const WalkOperator<Scalar> op(topology);
  const auto n = topology.node_count();
  ProbabilityVector<Scalar> inv_degree(n);
  for (Node v = 0; v < n; ++v) inv_degree(v) = Scalar(1) / Scalar(topology.degree(v));
  // Column i holds the law of the walk started at i.
  Dense laws = Dense::Identity(n, n);
  std::vector<Scalar> out;
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) laws = op.transition() * laws;
    out.push_back((inv_degree.asDiagonal() * laws).maxCoeff());
  }
  return out;
}

template <typename Scalar = double>
Scalar degree_weighted_beta(const Topology& topology, int m) {
  return degree_weighted_beta_profile<Scalar>(topology, m).back();
}

/// Total variation distance (half the 1-norm) between the m-step law from start and the
/// degree-proportional stationary law. Multiply by 2 for the 1-norm form.
template <typename Scalar = double>
Scalar tv_to_stationary(const Topology& topology, Node start, int m) {
  const auto d = step_distribution<Scalar>(topology, start, m);
  return (d.probabilities - stationary_distribution<Scalar>(topology)).template lpNorm<1>() / Scalar(2);
}

template <typename Scalar = double>
std::vector<Scalar> tv_profile(const Topology& topology, Node start, int m_max) {
  const WalkOperator<Scalar> op(topology);
  const auto pi = stationary_distribution<Scalar>(topology);
  std::vector<Scalar> out;
  auto p = op.indicator(start);
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) p = op.apply(p);
    out.push_back((p - pi).template lpNorm<1>() / Scalar(2));
  }
  return out;
}

}  // namespace census
