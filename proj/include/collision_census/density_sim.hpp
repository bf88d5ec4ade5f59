#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "collision_census/topology.hpp"

namespace census {

enum class Algorithm { encounter, independent, frequency };

/// Called once per round r = 1..t after movement with positions and per-agent counts.
using RoundObserver =
    std::function<void(std::int64_t round, std::span<const Node> positions, std::span<const std::int64_t> counts)>;

struct SimConfig {
  std::shared_ptr<const Topology> topology;
  /// Total agents n + 1; density is d = n / A.
  std::int64_t agents = 1;
  std::int64_t rounds = 1;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::encounter;
  /// Bernoulli label probability for frequency runs.
  double label_fraction = 0.0;

  // Instrumentation. Empty means "draw from the stream".
  std::vector<Node> initial_positions;
  std::vector<char> forced_walking;
  RoundObserver observer;

  double density() const;
};

/// Throws Error(precondition) naming the violated field.
void validate(const SimConfig& config);

struct DensityEstimate {
  /// Encounter rate: raw count. Independent sampling: count after reduction mod t.
  std::int64_t collisions = 0;
  /// c / t (encounter rate) or 2c / t (independent sampling).
  double estimate = 0.0;
  Algorithm algorithm = Algorithm::encounter;
};

struct FrequencyEstimate {
  DensityEstimate all;
  std::int64_t labeled_collisions = 0;
  double labeled_estimate = 0.0;
  /// labeled_estimate / all.estimate; absent when all.estimate == 0.
  std::optional<double> frequency;
  bool labeled = false;
};

// Stream layout per trial (one engine seeded with config.seed):
//   1. one stationary_sample draw per agent, agent order 0..n
//   2. independent sampling: one fair coin per agent; frequency runs: one uniform_unit per agent
//   3. each round, one random_step draw per agent in agent order (encounter / frequency)
// Co-locations at placement are never counted; counting uses end-of-round states only.

/// Random-walk encounter-rate estimation on any topology.
std::vector<DensityEstimate> run_encounter_rate(const SimConfig& config);

/// Stationary/walking split on a 2D torus; walkers move by (0, +1) every round.
std::vector<DensityEstimate> run_independent_sampling(const SimConfig& config);

/// Encounter rate with a second counter over labeled agents. `labels` (one per agent)
/// overrides the Bernoulli(label_fraction) draws when non-empty.
std::vector<FrequencyEstimate> run_frequency_estimation(const SimConfig& config, std::span<const char> labels = {});

/// Trial k runs config with seed derive_seed(config.seed, k). Observers are not forwarded.
std::vector<std::vector<DensityEstimate>> run_density_trials(const SimConfig& config, std::size_t trials,
                                                             unsigned threads = 0);
std::vector<std::vector<FrequencyEstimate>> run_frequency_trials(const SimConfig& config, std::size_t trials,
                                                                 unsigned threads = 0);

}  // namespace census
