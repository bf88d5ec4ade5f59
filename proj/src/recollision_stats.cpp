#include "collision_census/recollision_stats.hpp"

#include <algorithm>
#include <cmath>

#include "collision_census/error.hpp"
#include "collision_census/exact_oracle.hpp"
#include "collision_census/parallel.hpp"
#include "collision_census/rng.hpp"

namespace census {

namespace {

// Trials are processed in fixed blocks; block b draws from derive_seed(seed, b), so the
// sample set does not depend on the thread count.
constexpr std::uint64_t kBlock = 4096;

std::size_t block_count(std::uint64_t trials) { return static_cast<std::size_t>((trials + kBlock - 1) / kBlock); }

std::uint64_t block_size(std::uint64_t trials, std::size_t block) {
  return std::min<std::uint64_t>(kBlock, trials - block * kBlock);
}

BetaProfile from_hits(const std::vector<std::uint64_t>& hits, std::uint64_t trials) {
  BetaProfile p;
  p.source = ProfileSource::empirical;
  for (const auto h : hits) {
    const double b = trials ? static_cast<double>(h) / static_cast<double>(trials) : 0.0;
    p.values.push_back(b);
    p.standard_errors.push_back(trials ? std::sqrt(b * (1.0 - b) / static_cast<double>(trials)) : 0.0);
    p.trials.push_back(trials);
  }
  return p;
}

template <typename Trial>
std::vector<std::uint64_t> accumulate_hits(int m_max, std::uint64_t trials, std::uint64_t seed, unsigned threads,
                                           Trial&& trial) {
  if (m_max < 0) throw Error(Errc::precondition, "m_max must be >= 0");
  if (trials < 1) throw Error(Errc::precondition, "trials must be >= 1");
  const auto per_block = parallel_map<std::vector<std::uint64_t>>(block_count(trials), threads, [&](std::size_t b) {
    std::vector<std::uint64_t> hits(static_cast<std::size_t>(m_max) + 1, 0);
    Rng rng(derive_seed(seed, b));
    for (std::uint64_t i = 0; i < block_size(trials, b); ++i) trial(rng, hits);
    return hits;
  });
  std::vector<std::uint64_t> hits(static_cast<std::size_t>(m_max) + 1, 0);
  for (const auto& h : per_block)
    for (std::size_t m = 0; m < h.size(); ++m) hits[m] += h[m];
  return hits;
}

template <typename Trial>
std::vector<std::int64_t> collect_counts(std::uint64_t trials, std::uint64_t seed, unsigned threads, Trial&& trial) {
  const auto per_block = parallel_map<std::vector<std::int64_t>>(block_count(trials), threads, [&](std::size_t b) {
    std::vector<std::int64_t> out;
    Rng rng(derive_seed(seed, b));
    for (std::uint64_t i = 0; i < block_size(trials, b); ++i) out.push_back(trial(rng));
    return out;
  });
  std::vector<std::int64_t> all;
  all.reserve(static_cast<std::size_t>(trials));
  for (const auto& v : per_block) all.insert(all.end(), v.begin(), v.end());
  return all;
}

BetaProfile exact(const std::vector<double>& values) {
  BetaProfile p;
  p.source = ProfileSource::oracle;
  p.values = values;
  p.standard_errors.assign(values.size(), 0.0);
  p.trials.assign(values.size(), 0);
  return p;
}

}  // namespace

BetaProfile empirical_beta_profile(const Topology& topology, int m_max, std::uint64_t trials, std::uint64_t seed,
                                   unsigned threads) {
  const auto hits = accumulate_hits(m_max, trials, seed, threads, [&](Rng& rng, std::vector<std::uint64_t>& h) {
    Node a = topology.stationary_sample(rng);
    Node b = a;
    ++h[0];
    for (int m = 1; m <= m_max; ++m) {
      a = topology.random_step(a, rng);
      b = topology.random_step(b, rng);
      h[m] += (a == b);
    }
  });
  return from_hits(hits, trials);
}

BetaProfile empirical_equalization_profile(const Topology& topology, int m_max, std::uint64_t trials,
                                           std::uint64_t seed, unsigned threads) {
  const auto hits = accumulate_hits(m_max, trials, seed, threads, [&](Rng& rng, std::vector<std::uint64_t>& h) {
    const Node start = topology.stationary_sample(rng);
    Node a = start;
    ++h[0];
    for (int m = 1; m <= m_max; ++m) {
      a = topology.random_step(a, rng);
      h[m] += (a == start);
    }
  });
  return from_hits(hits, trials);
}

BetaProfile oracle_beta_profile(const Topology& topology, Node start, int m_max) {
  return exact(recollision_profile<double>(topology, start, m_max));
}

BetaProfile oracle_equalization_profile(const Topology& topology, Node start, int m_max) {
  return exact(equalization_profile<double>(topology, start, m_max));
}

std::vector<std::int64_t> pair_collision_counts(const Topology& topology, std::int64_t rounds, std::uint64_t trials,
                                                std::uint64_t seed, unsigned threads) {
  if (rounds < 1) throw Error(Errc::precondition, "rounds must be >= 1");
  return collect_counts(trials, seed, threads, [&](Rng& rng) {
    Node a = topology.stationary_sample(rng);
    Node b = topology.stationary_sample(rng);
    std::int64_t c = 0;
    for (std::int64_t r = 1; r <= rounds; ++r) {
      a = topology.random_step(a, rng);
      b = topology.random_step(b, rng);
      c += (a == b);
    }
    return c;
  });
}

std::vector<std::int64_t> visit_counts(const Topology& topology, std::int64_t rounds, std::uint64_t trials,
                                       std::uint64_t seed, Node tracked, unsigned threads) {
  if (rounds < 1) throw Error(Errc::precondition, "rounds must be >= 1");
  if (tracked < 0 || tracked >= topology.node_count()) throw Error(Errc::node_out_of_range, "tracked node");
  return collect_counts(trials, seed, threads, [&](Rng& rng) {
    Node a = topology.stationary_sample(rng);
    std::int64_t c = 0;
    for (std::int64_t r = 1; r <= rounds; ++r) {
      a = topology.random_step(a, rng);
      c += (a == tracked);
    }
    return c;
  });
}

std::vector<MomentReport> sample_moments(std::span<const std::int64_t> samples, int max_order,
                                         const std::string& topology, std::int64_t rounds) {
  if (max_order < 1 || max_order > 4) throw Error(Errc::precondition, "moment order must lie in [1, 4]");
  if (samples.empty()) throw Error(Errc::precondition, "no samples");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (const auto x : samples) mean += static_cast<double>(x);
  mean /= n;

  std::vector<MomentReport> out;
  for (int k = 1; k <= max_order; ++k) {
    // Order 1 averages x; order k >= 2 averages (x - mean)^k.
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto x : samples) {
      const double term = k == 1 ? static_cast<double>(x) : std::pow(static_cast<double>(x) - mean, k);
      sum += term;
      sum_sq += term * term;
    }
    const double avg = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * avg * avg) / (n - 1)) : 0.0;
    out.push_back({k, avg, std::sqrt(var / n), samples.size(), topology, rounds});
  }
  return out;
}

std::vector<MomentReport> pair_collision_moments(const Topology& topology, std::int64_t rounds, int max_order,
                                                 std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  if (!topology.is_regular()) throw Error(Errc::irregular_graph, "pair moments assume a regular topology");
  if (rounds > topology.node_count()) throw Error(Errc::precondition, "rounds: need t <= A");
  const auto counts = pair_collision_counts(topology, rounds, trials, seed, threads);
  return sample_moments(counts, max_order, topology.describe(), rounds);
}

std::vector<MomentReport> visit_count_moments(const Topology& topology, std::int64_t rounds, std::uint64_t trials,
                                              std::uint64_t seed, int max_order, Node tracked, unsigned threads) {
  const auto counts = visit_counts(topology, rounds, trials, seed, tracked, threads);
  return sample_moments(counts, max_order, topology.describe(), rounds);
}

HitRate first_collision_probability(const Topology& topology, std::int64_t rounds, std::uint64_t trials,
                                    std::uint64_t seed, unsigned threads) {
  const auto counts = pair_collision_counts(topology, rounds, trials, seed, threads);
  const auto hits = std::count_if(counts.begin(), counts.end(), [](std::int64_t c) { return c >= 1; });
  const double p = static_cast<double>(hits) / static_cast<double>(counts.size());
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(counts.size())), counts.size()};
}

BoundFamily parse_bound_family(std::string_view name) {
  if (name == "torus2d") return BoundFamily::torus2d;
  if (name == "ring") return BoundFamily::ring;
  if (name == "torus_kd" || name == "torus") return BoundFamily::torus_kd;
  if (name == "expander") return BoundFamily::expander;
  if (name == "hypercube") return BoundFamily::hypercube;
  throw Error(Errc::unknown_family, "unknown bound family '" + std::string(name) + "'");
}

std::string_view bound_family_name(BoundFamily family) noexcept {
  switch (family) {
    case BoundFamily::torus2d: return "torus2d";
    case BoundFamily::ring: return "ring";
    case BoundFamily::torus_kd: return "torus_kd";
    case BoundFamily::expander: return "expander";
    case BoundFamily::hypercube: return "hypercube";
  }
  return "unknown";
}

double theoretical_beta(const FamilyBound& bound, int m) {
  if (m < 0) throw Error(Errc::precondition, "m must be >= 0");
  if (bound.nodes <= 0) throw Error(Errc::precondition, "A must be positive");
  const double x = static_cast<double>(m) + 1.0;
  const double inv_a = 1.0 / bound.nodes;
  switch (bound.family) {
    case BoundFamily::torus2d: return 1.0 / x + inv_a;
    case BoundFamily::ring: return 1.0 / std::sqrt(x) + inv_a;
    case BoundFamily::torus_kd:
      if (bound.dims < 1) throw Error(Errc::invalid_dimension, "torus_kd needs k >= 1");
      return std::pow(x, -0.5 * bound.dims) + inv_a;
    case BoundFamily::expander:
      if (bound.lambda < 0.0 || bound.lambda > 1.0) throw Error(Errc::precondition, "lambda must lie in [0, 1]");
      return std::pow(bound.lambda, m) + 2.0 * inv_a;
    case BoundFamily::hypercube: return std::pow(0.7, m) + 1.0 / std::sqrt(bound.nodes);
  }
  throw Error(Errc::unknown_family, "unknown bound family");
}

BetaProfile theoretical_profile(const FamilyBound& bound, int m_max) {
  if (m_max < 0) throw Error(Errc::precondition, "m_max must be >= 0");
  BetaProfile p;
  p.source = ProfileSource::theoretical;
  for (int m = 0; m <= m_max; ++m) p.values.push_back(theoretical_beta(bound, m));
  p.standard_errors.assign(p.values.size(), 0.0);
  p.trials.assign(p.values.size(), 0);
  return p;
}

double big_B(const BetaProfile& profile, int t) {
  if (t < 0 || t > profile.m_max())
    throw Error(Errc::out_of_range, "B(t) needs 0 <= t <= m_max = " + std::to_string(profile.m_max()));
  double sum = 0.0;
  for (int m = 0; m <= t; ++m) sum += profile.values[m];
  return sum;
}

}  // namespace census
