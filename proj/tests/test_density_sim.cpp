#include <doctest.h>

#include <algorithm>
#include <memory>

#include "collision_census/density_sim.hpp"
#include "collision_census/error.hpp"
#include "collision_census/occupancy.hpp"
#include "support.hpp"

using namespace census;
using namespace census::testing;

namespace {

SimConfig make_config(Topology topo, std::int64_t agents, std::int64_t rounds, std::uint64_t seed = 1,
                      Algorithm algorithm = Algorithm::encounter) {
  SimConfig c;
  c.topology = std::make_shared<const Topology>(std::move(topo));
  c.agents = agents;
  c.rounds = rounds;
  c.seed = seed;
  c.algorithm = algorithm;
  return c;
}

// Per-trial average of d~ over agents; agents inside a trial are correlated.
std::vector<double> trial_means(const std::vector<std::vector<DensityEstimate>>& runs) {
  std::vector<double> out;
  for (const auto& run : runs) {
    double s = 0;
    for (const auto& e : run) s += e.estimate;
    out.push_back(s / static_cast<double>(run.size()));
  }
  return out;
}

}  // namespace

TEST_CASE("occupancy_collisions examples") {
  const std::vector<Node> distinct{0, 1, 2, 3, 4};
  for (const auto c : occupancy_collisions(distinct)) CHECK(c == 0);

  const std::vector<Node> stacked{7, 7, 7};
  const auto s = occupancy_collisions(stacked);
  CHECK(s == std::vector<std::int64_t>{2, 2, 2});

  const std::vector<Node> mixed{5, 5, 9};
  CHECK(occupancy_collisions(mixed) == std::vector<std::int64_t>{1, 1, 0});

  CHECK(occupancy_collisions(std::span<const Node>{}).empty());
}

TEST_CASE("occupancy map handles large and clustered node ids") {
  Rng rng(3);
  std::vector<Node> positions;
  for (int i = 0; i < 500; ++i) positions.push_back(static_cast<Node>(uniform_index(rng, 40)) * (Node{1} << 40));
  const auto counts = occupancy_collisions(positions);
  std::map<Node, std::int64_t> occ;
  for (const Node p : positions) ++occ[p];
  for (std::size_t a = 0; a < positions.size(); ++a) CHECK(counts[a] == occ[positions[a]] - 1);

  OccupancyMap map(4);
  map.add(11, true);
  map.add(11, false);
  map.add(3, true);
  CHECK(map.total(11) == 2);
  CHECK(map.marked(11) == 1);
  CHECK(map.total(4) == 0);
  map.clear();
  CHECK(map.total(11) == 0);
  CHECK(map.marked(3) == 0);
}

TEST_CASE("single agent never collides") {
  for (const auto algorithm : {Algorithm::encounter, Algorithm::independent}) {
    auto cfg = make_config(Topology::torus({32, 32}), 1, 16, 9, algorithm);
    const auto runs = run_density_trials(cfg, 20);
    for (const auto& run : runs) {
      REQUIRE(run.size() == 1);
      CHECK(run[0].collisions == 0);
      CHECK(run[0].estimate == 0.0);
    }
  }
}

TEST_CASE("encounter-rate estimate is c / t exactly") {
  auto cfg = make_config(Topology::torus({8, 8}), 30, 7, 5);
  for (const auto& e : run_encounter_rate(cfg)) {
    CHECK(e.estimate == static_cast<double>(e.collisions) / 7.0);
    CHECK(e.algorithm == Algorithm::encounter);
  }
}

TEST_CASE("encounter-rate unbiasedness on the 32x32 torus") {
  auto cfg = make_config(Topology::torus({32, 32}), 11, 512, 2024);
  const auto stats = mean_se(trial_means(run_density_trials(cfg, 2000)));
  const double d = 10.0 / 1024.0;
  CHECK(cfg.density() == d);
  CHECK(std::abs(stats.mean - d) <= 3 * stats.se);
}

TEST_CASE("two agents on K_A after one round collide with probability 1/A") {
  // Uniform placement is stationary, so after the step the two walkers are independent
  // uniform nodes: 1/A, not the 1/(A-1) of a conditional single-step count.
  const int a = 6;
  auto cfg = make_config(complete_graph(a), 2, 1, 8);
  const auto runs = run_density_trials(cfg, 200000);
  std::vector<double> xs;
  for (const auto& run : runs) {
    CHECK((run[0].estimate == 0.0 || run[0].estimate == 1.0));
    CHECK(run[0].collisions == run[1].collisions);
    xs.push_back(run[0].estimate);
  }
  const auto stats = mean_se(xs);
  CHECK(std::abs(stats.mean - 1.0 / a) <= 4 * stats.se);
  CHECK(std::abs(stats.mean - 1.0 / (a - 1)) > 4 * stats.se);
}

TEST_CASE("initial co-locations are not counted") {
  // Two agents stacked at round 0 on a ring of 1001 nodes: they meet after one round only
  // if they take the same step (probability 1/2), never for the placement itself.
  auto cfg = make_config(Topology::ring(1001), 2, 1, 1);
  cfg.initial_positions = {500, 500};
  std::vector<double> xs;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    cfg.seed = s;
    xs.push_back(static_cast<double>(run_encounter_rate(cfg)[0].collisions));
  }
  const auto stats = mean_se(xs);
  CHECK(std::abs(stats.mean - 0.5) <= 4 * stats.se);
}

TEST_CASE("independent sampling: spurious walker collisions cancel mod t") {
  const std::int64_t agents = 9;
  const std::int64_t t = 20;
  auto cfg = make_config(Topology::torus({64, 64}), agents, t, 3, Algorithm::independent);
  cfg.initial_positions.assign(agents, 100);
  cfg.forced_walking.assign(agents, 1);
  std::vector<std::int64_t> raw(agents, 0);
  cfg.observer = [&](std::int64_t, std::span<const Node>, std::span<const std::int64_t> counts) {
    for (std::int64_t a = 0; a < agents; ++a) raw[a] += counts[a];
  };
  for (const auto& e : run_independent_sampling(cfg)) {
    CHECK(e.collisions == 0);
    CHECK(e.estimate == 0.0);
  }
  for (const auto r : raw) CHECK(r == (agents - 1) * t);
}

TEST_CASE("independent sampling: walkers from distinct starts never meet") {
  const std::int64_t agents = 50;
  auto cfg = make_config(Topology::torus({64, 64}), agents, 63, 4, Algorithm::independent);
  for (Node v = 0; v < agents; ++v) cfg.initial_positions.push_back(v * 67 % 4096);
  cfg.forced_walking.assign(agents, 1);
  std::int64_t seen = 0;
  cfg.observer = [&](std::int64_t, std::span<const Node>, std::span<const std::int64_t> counts) {
    for (const auto c : counts) seen += c;
  };
  run_independent_sampling(cfg);
  CHECK(seen == 0);
}

TEST_CASE("independent sampling walkers step (0, +1)") {
  auto cfg = make_config(Topology::torus({16, 16}), 1, 15, 4, Algorithm::independent);
  cfg.initial_positions = {Topology::torus({16, 16}).node_at(std::vector<std::int64_t>{3, 14})};
  cfg.forced_walking = {1};
  std::vector<Node> trace;
  cfg.observer = [&](std::int64_t, std::span<const Node> pos, std::span<const std::int64_t>) {
    trace.push_back(pos[0]);
  };
  run_independent_sampling(cfg);
  for (std::size_t r = 0; r < trace.size(); ++r) {
    const auto x = cfg.topology->coordinates(trace[r]);
    CHECK(x[0] == 3);
    CHECK(x[1] == static_cast<std::int64_t>((14 + r + 1) % 16));
  }
}

TEST_CASE("independent sampling unbiasedness on the 64x64 torus") {
  auto cfg = make_config(Topology::torus({64, 64}), 41, 32, 77, Algorithm::independent);
  const auto runs = run_density_trials(cfg, 5000);
  for (const auto& run : runs)
    for (const auto& e : run) {
      CHECK(e.collisions < 32);
      CHECK(e.estimate == 2.0 * static_cast<double>(e.collisions) / 32.0);
    }
  const auto stats = mean_se(trial_means(runs));
  CHECK(std::abs(stats.mean - 40.0 / 4096) <= 3 * stats.se);
}

TEST_CASE("frequency estimation with fixed labels") {
  auto cfg = make_config(Topology::torus({8, 8}), 40, 64, 6, Algorithm::frequency);
  const std::vector<char> all(40, 1);
  const std::vector<char> none(40, 0);
  int defined = 0;
  for (const auto& e : run_frequency_estimation(cfg, all)) {
    CHECK(e.labeled);
    if (e.all.estimate > 0) {
      REQUIRE(e.frequency.has_value());
      CHECK(*e.frequency == 1.0);
      ++defined;
    } else {
      CHECK_FALSE(e.frequency.has_value());
    }
  }
  CHECK(defined > 0);
  for (const auto& e : run_frequency_estimation(cfg, none)) {
    CHECK(e.labeled_collisions == 0);
    if (e.all.estimate > 0) CHECK(*e.frequency == 0.0);
  }
  // Same seed, same movement: the all-collision counter is label-independent.
  const auto a = run_frequency_estimation(cfg, all);
  const auto b = run_frequency_estimation(cfg, none);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].all.collisions == b[i].all.collisions);
}

TEST_CASE("frequency estimation: zero collisions leave f absent") {
  auto cfg = make_config(Topology::ring(1000), 1, 10, 6, Algorithm::frequency);
  const std::vector<char> labels{1};
  const auto e = run_frequency_estimation(cfg, labels);
  CHECK_FALSE(e[0].frequency.has_value());
}

TEST_CASE("frequency median on the 64x64 torus") {
  auto cfg = make_config(Topology::torus({64, 64}), 101, 4096, 13, Algorithm::frequency);
  cfg.label_fraction = 0.3;
  const auto runs = run_frequency_trials(cfg, 500);
  std::vector<double> fs;
  std::int64_t labeled = 0, agents = 0;
  for (const auto& run : runs)
    for (const auto& e : run) {
      if (e.frequency) fs.push_back(*e.frequency);
      labeled += e.labeled;
      ++agents;
    }
  std::nth_element(fs.begin(), fs.begin() + fs.size() / 2, fs.end());
  const double median = fs[fs.size() / 2];
  CHECK(median >= 0.25);
  CHECK(median <= 0.35);
  CHECK(static_cast<double>(labeled) / agents == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("collision symmetry holds every round") {
  const std::vector<Topology> graphs{Topology::torus({6, 6}), Topology::ring(10), star_graph(4)};
  for (const auto& g : graphs) {
    auto cfg = make_config(g, 25, 50, 8);
    std::int64_t rounds = 0;
    cfg.observer = [&](std::int64_t round, std::span<const Node> pos, std::span<const std::int64_t> counts) {
      CHECK(round == rounds + 1);
      rounds = round;
      std::map<Node, std::int64_t> occ;
      for (const Node p : pos) ++occ[p];
      std::int64_t lhs = 0, rhs = 0;
      for (const auto c : counts) lhs += c;
      for (const auto& [v, k] : occ) rhs += k * (k - 1);
      CHECK(lhs == rhs);
    };
    run_encounter_rate(cfg);
    CHECK(rounds == 50);
  }
}

TEST_CASE("trials are deterministic and thread-count independent") {
  auto cfg = make_config(Topology::torus({20, 20}), 12, 100, 99);
  const auto a = run_density_trials(cfg, 30, 1);
  const auto b = run_density_trials(cfg, 30, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < a[k].size(); ++i) {
      CHECK(a[k][i].collisions == b[k][i].collisions);
      CHECK(a[k][i].estimate == b[k][i].estimate);
    }
  cfg.seed = derive_seed(99, 7);
  const auto direct = run_encounter_rate(cfg);
  for (std::size_t i = 0; i < direct.size(); ++i) CHECK(direct[i].collisions == a[7][i].collisions);
}

TEST_CASE("config validation") {
  auto cfg = make_config(Topology::torus({16, 16}), 5, 16, 1, Algorithm::independent);
  CHECK_THROWS_AS(run_independent_sampling(cfg), Error);  // t = sqrt(A)
  cfg.rounds = 15;
  CHECK_NOTHROW(run_independent_sampling(cfg));
  cfg.agents = 258;
  CHECK_THROWS_AS(run_independent_sampling(cfg), Error);  // d > 1

  auto ring = make_config(Topology::ring(400), 3, 5, 1, Algorithm::independent);
  CHECK_THROWS_AS(run_independent_sampling(ring), Error);
  ring.algorithm = Algorithm::encounter;
  CHECK_NOTHROW(run_encounter_rate(ring));

  auto bad = make_config(Topology::ring(10), 3, 0);
  CHECK_THROWS_AS(run_encounter_rate(bad), Error);
  bad.rounds = 1;
  bad.agents = 0;
  CHECK_THROWS_AS(run_encounter_rate(bad), Error);
  bad.agents = 3;
  bad.initial_positions = {1, 2};
  CHECK_THROWS_AS(run_encounter_rate(bad), Error);
  bad.initial_positions = {1, 2, 10};
  CHECK_THROWS_AS(run_encounter_rate(bad), Error);
  bad.initial_positions.clear();
  bad.label_fraction = 1.5;
  CHECK_THROWS_AS(run_frequency_estimation(bad), Error);
  try {
    validate(SimConfig{});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition);
  }
}
