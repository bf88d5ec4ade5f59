#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collision_census/topology.hpp"

namespace census {

enum class ProfileSource { empirical, oracle, theoretical };

/// beta(m) for m = 0..m_max. Empirical entries carry binomial standard errors
/// sqrt(b (1 - b) / trials); they are per-m marginals (one trajectory serves every m).
struct BetaProfile {
  ProfileSource source = ProfileSource::empirical;
  std::vector<double> values;
  std::vector<double> standard_errors;
  std::vector<std::uint64_t> trials;

  int m_max() const noexcept { return static_cast<int>(values.size()) - 1; }
};

/// Two walkers start on a common stationary node and step independently; records
/// co-location at every m <= m_max.
BetaProfile empirical_beta_profile(const Topology& topology, int m_max, std::uint64_t trials, std::uint64_t seed,
                                   unsigned threads = 0);

/// One walker from a stationary node; records being back at the start.
BetaProfile empirical_equalization_profile(const Topology& topology, int m_max, std::uint64_t trials,
                                           std::uint64_t seed, unsigned threads = 0);

BetaProfile oracle_beta_profile(const Topology& topology, Node start, int m_max);
BetaProfile oracle_equalization_profile(const Topology& topology, Node start, int m_max);

struct MomentReport {
  /// 1: mean. 2..4: central moments.
  int order = 1;
  double value = 0.0;
  /// Standard error of the sample average behind `value`.
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::string topology;
  std::int64_t rounds = 0;
};

/// Co-location counts over rounds 1..t of one pair of walkers placed independently
/// at stationary nodes, one entry per trial.
std::vector<std::int64_t> pair_collision_counts(const Topology& topology, std::int64_t rounds, std::uint64_t trials,
                                                std::uint64_t seed, unsigned threads = 0);

/// Visits to `tracked` over rounds 1..t by one walker started at a stationary node.
std::vector<std::int64_t> visit_counts(const Topology& topology, std::int64_t rounds, std::uint64_t trials,
                                       std::uint64_t seed, Node tracked = 0, unsigned threads = 0);

/// Mean and central moments up to max_order (<= 4) of integer samples.
std::vector<MomentReport> sample_moments(std::span<const std::int64_t> samples, int max_order,
                                         const std::string& topology, std::int64_t rounds);

std::vector<MomentReport> pair_collision_moments(const Topology& topology, std::int64_t rounds, int max_order,
                                                 std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);
std::vector<MomentReport> visit_count_moments(const Topology& topology, std::int64_t rounds, std::uint64_t trials,
                                              std::uint64_t seed, int max_order = 4, Node tracked = 0,
                                              unsigned threads = 0);

struct HitRate {
  double probability = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
};

/// Pr[pair collides at least once in t rounds].
HitRate first_collision_probability(const Topology& topology, std::int64_t rounds, std::uint64_t trials,
                                    std::uint64_t seed, unsigned threads = 0);

enum class BoundFamily { torus2d, ring, torus_kd, expander, hypercube };

BoundFamily parse_bound_family(std::string_view name);
std::string_view bound_family_name(BoundFamily family) noexcept;

struct FamilyBound {
  BoundFamily family = BoundFamily::torus2d;
  /// A
  double nodes = 1.0;
  /// k for torus_kd.
  int dims = 2;
  /// lambda for expander.
  double lambda = 0.0;
};

/// Leading forms with unit constants:
///   torus2d 1/(m+1) + 1/A, ring 1/sqrt(m+1) + 1/A, torus_kd (m+1)^(-k/2) + 1/A,
///   expander lambda^m + 2/A, hypercube 0.7^m + 1/sqrt(A).
double theoretical_beta(const FamilyBound& bound, int m);
BetaProfile theoretical_profile(const FamilyBound& bound, int m_max);

/// B(t) = sum_{m=0}^{t} beta(m).
double big_B(const BetaProfile& profile, int t);

}  // namespace census
