#include "collision_census/density_sim.hpp"

#include <string>

#include "collision_census/error.hpp"
#include "collision_census/occupancy.hpp"
#include "collision_census/parallel.hpp"
#include "collision_census/rng.hpp"

namespace census {

namespace {

std::vector<Node> place_agents(const SimConfig& config, Rng& rng) {
  const auto& topo = *config.topology;
  if (!config.initial_positions.empty()) {
    for (const Node v : config.initial_positions)
      if (v < 0 || v >= topo.node_count())
        throw Error(Errc::node_out_of_range, "initial position " + std::to_string(v));
    return config.initial_positions;
  }
  std::vector<Node> positions(static_cast<std::size_t>(config.agents));
  for (auto& p : positions) p = topo.stationary_sample(rng);
  return positions;
}

}  // namespace

double SimConfig::density() const {
  return static_cast<double>(agents - 1) / static_cast<double>(topology->node_count());
}

void validate(const SimConfig& config) {
  if (!config.topology) throw Error(Errc::precondition, "topology: missing");
  if (config.rounds < 1) throw Error(Errc::precondition, "rounds: t must be >= 1");
  if (config.agents < 1) throw Error(Errc::precondition, "agents: need at least one agent");
  if (config.label_fraction < 0.0 || config.label_fraction > 1.0)
    throw Error(Errc::precondition, "label_fraction: must lie in [0, 1]");
  if (!config.initial_positions.empty() && static_cast<std::int64_t>(config.initial_positions.size()) != config.agents)
    throw Error(Errc::precondition, "initial_positions: one entry per agent required");
  if (!config.forced_walking.empty() && static_cast<std::int64_t>(config.forced_walking.size()) != config.agents)
    throw Error(Errc::precondition, "forced_walking: one entry per agent required");
  if (config.algorithm == Algorithm::independent) {
    const auto& topo = *config.topology;
    if (topo.family() != Family::torus || topo.dimensions() != 2)
      throw Error(Errc::precondition, "topology: independent sampling runs on a 2D torus");
    if (config.rounds * config.rounds >= topo.node_count())
      throw Error(Errc::precondition, "rounds: independent sampling needs t < sqrt(A)");
    if (config.agents - 1 > topo.node_count()) throw Error(Errc::precondition, "agents: density must be <= 1");
  }
}

std::vector<DensityEstimate> run_encounter_rate(const SimConfig& config) {
  validate(config);
  const auto& topo = *config.topology;
  Rng rng(config.seed);
  auto positions = place_agents(config, rng);
  const auto n = positions.size();
  std::vector<std::int64_t> totals(n, 0);
  std::vector<std::int64_t> counts(n, 0);
  OccupancyMap occupancy(n);

  for (std::int64_t round = 1; round <= config.rounds; ++round) {
    for (auto& p : positions) p = topo.random_step(p, rng);
    occupancy.clear();
    for (const Node p : positions) occupancy.add(p);
    for (std::size_t a = 0; a < n; ++a) {
      counts[a] = occupancy.total(positions[a]) - 1;
      totals[a] += counts[a];
    }
    if (config.observer) config.observer(round, positions, counts);
  }

  std::vector<DensityEstimate> out(n);
  const double t = static_cast<double>(config.rounds);
  for (std::size_t a = 0; a < n; ++a) out[a] = {totals[a], static_cast<double>(totals[a]) / t, Algorithm::encounter};
  return out;
}

std::vector<DensityEstimate> run_independent_sampling(const SimConfig& config) {
  SimConfig checked = config;
  checked.algorithm = Algorithm::independent;
  validate(checked);
  const auto& topo = *config.topology;
  Rng rng(config.seed);
  auto positions = place_agents(config, rng);
  const auto n = positions.size();
  std::vector<char> walking(n);
  for (std::size_t a = 0; a < n; ++a) {
    const bool coin = fair_coin(rng);
    walking[a] = config.forced_walking.empty() ? coin : config.forced_walking[a];
  }

  std::vector<std::int64_t> totals(n, 0);
  std::vector<std::int64_t> counts(n, 0);
  OccupancyMap occupancy(n);
  for (std::int64_t round = 1; round <= config.rounds; ++round) {
    for (std::size_t a = 0; a < n; ++a)
      if (walking[a]) positions[a] = topo.shift(positions[a], 1, 1);
    occupancy.clear();
    for (const Node p : positions) occupancy.add(p);
    for (std::size_t a = 0; a < n; ++a) {
      counts[a] = occupancy.total(positions[a]) - 1;
      totals[a] += counts[a];
    }
    if (config.observer) config.observer(round, positions, counts);
  }

  std::vector<DensityEstimate> out(n);
  const double t = static_cast<double>(config.rounds);
  for (std::size_t a = 0; a < n; ++a) {
    const std::int64_t c = totals[a] % config.rounds;
    out[a] = {c, 2.0 * static_cast<double>(c) / t, Algorithm::independent};
  }
  return out;
}

std::vector<FrequencyEstimate> run_frequency_estimation(const SimConfig& config, std::span<const char> labels) {
  validate(config);
  const auto& topo = *config.topology;
  Rng rng(config.seed);
  auto positions = place_agents(config, rng);
  const auto n = positions.size();
  if (!labels.empty() && labels.size() != n) throw Error(Errc::precondition, "labels: one entry per agent required");
  std::vector<char> label(n);
  for (std::size_t a = 0; a < n; ++a) {
    const bool drawn = uniform_unit(rng) < config.label_fraction;
    label[a] = labels.empty() ? drawn : labels[a];
  }

  std::vector<std::int64_t> totals(n, 0);
  std::vector<std::int64_t> labeled_totals(n, 0);
  std::vector<std::int64_t> counts(n, 0);
  OccupancyMap occupancy(n);
  for (std::int64_t round = 1; round <= config.rounds; ++round) {
    for (auto& p : positions) p = topo.random_step(p, rng);
    occupancy.clear();
    for (std::size_t a = 0; a < n; ++a) occupancy.add(positions[a], label[a] != 0);
    for (std::size_t a = 0; a < n; ++a) {
      counts[a] = occupancy.total(positions[a]) - 1;
      totals[a] += counts[a];
      labeled_totals[a] += occupancy.marked(positions[a]) - (label[a] ? 1 : 0);
    }
    if (config.observer) config.observer(round, positions, counts);
  }

  std::vector<FrequencyEstimate> out(n);
  const double t = static_cast<double>(config.rounds);
  for (std::size_t a = 0; a < n; ++a) {
    auto& e = out[a];
    e.all = {totals[a], static_cast<double>(totals[a]) / t, Algorithm::frequency};
    e.labeled_collisions = labeled_totals[a];
    e.labeled_estimate = static_cast<double>(labeled_totals[a]) / t;
    if (totals[a] > 0) e.frequency = static_cast<double>(labeled_totals[a]) / static_cast<double>(totals[a]);
    e.labeled = label[a] != 0;
  }
  return out;
}

std::vector<std::vector<DensityEstimate>> run_density_trials(const SimConfig& config, std::size_t trials,
                                                             unsigned threads) {
  validate(config);
  return parallel_map<std::vector<DensityEstimate>>(trials, threads, [&](std::size_t k) {
    SimConfig trial = config;
    trial.seed = derive_seed(config.seed, k);
    trial.observer = nullptr;
    return config.algorithm == Algorithm::independent ? run_independent_sampling(trial) : run_encounter_rate(trial);
  });
}

std::vector<std::vector<FrequencyEstimate>> run_frequency_trials(const SimConfig& config, std::size_t trials,
                                                                 unsigned threads) {
  validate(config);
  return parallel_map<std::vector<FrequencyEstimate>>(trials, threads, [&](std::size_t k) {
    SimConfig trial = config;
    trial.seed = derive_seed(config.seed, k);
    trial.observer = nullptr;
    return run_frequency_estimation(trial);
  });
}

}  // namespace census
