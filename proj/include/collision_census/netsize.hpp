#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "collision_census/rng.hpp"
#include "collision_census/topology.hpp"

namespace census {

/// Default constants standing in for the Theta(.) factors.
inline constexpr double kDefaultBurnInConstant = 4.0;
inline constexpr double kDefaultPlanConstant = 2.0;

struct QueryCounters {
  std::uint64_t neighborhood = 0;
  std::uint64_t degree = 0;
  /// The single seed lookup done when the crawl starts, plus any oracle placements.
  std::uint64_t bootstrap = 0;

  QueryCounters& operator+=(const QueryCounters& other) noexcept {
    neighborhood += other.neighborhood;
    degree += other.degree;
    bootstrap += other.bootstrap;
    return *this;
  }
};

/// Crawl view of a graph: neighborhoods may be read only for vertices already reached
/// (the seed or any vertex revealed by an earlier lookup). No node enumeration exists.
class LinkQueryGraph {
 public:
  /// Called on every lookup with the queried vertex and the neighborhood it revealed.
  using Observer = std::function<void(Node queried, std::span<const Node> revealed)>;

  LinkQueryGraph(std::shared_ptr<const Topology> topology, Node seed_vertex);

  Node seed_vertex() const noexcept { return seed_; }

  /// Gamma(v); counts one neighborhood query. Throws if v has not been reached.
  std::span<const Node> neighborhood(Node v);
  /// deg(v); counts one degree query.
  int degree(Node v);

  /// Oracle placement used to start walks exactly at the stationary law; counted as
  /// bootstrap and marks v as reached. Bypasses the crawl discipline by construction.
  std::span<const Node> admit(Node v);
  /// Neighborhood of the seed fetched at construction.
  std::span<const Node> seed_neighborhood() const noexcept { return lookup(seed_); }

  bool reached(Node v) const noexcept;
  const QueryCounters& counters() const noexcept { return counters_; }
  void set_observer(Observer observer) { observer_ = std::move(observer); }

 private:
  std::span<const Node> lookup(Node v) const noexcept;
  std::span<const Node> reveal(Node v);

  std::shared_ptr<const Topology> topology_;
  Node seed_;
  std::vector<std::int64_t> offsets_;
  std::vector<Node> targets_;
  std::vector<char> reached_;
  QueryCounters counters_;
  Observer observer_;
};

/// Walk positions plus the cached neighborhood of each current vertex.
struct WalkEnsemble {
  std::vector<Node> positions;
  std::vector<std::span<const Node>> neighborhoods;
  std::int64_t burn_in = 0;
  bool lazy = false;

  std::size_t size() const noexcept { return positions.size(); }
  int degree(std::size_t j) const noexcept { return static_cast<int>(neighborhoods[j].size()); }
};

/// One walk step from the cached neighborhood with one engine draw, then one
/// neighborhood query of the post-step vertex. Lazy walks draw r in [0, 2 deg) and hold
/// when r >= deg (the held vertex is still re-queried).
void advance_walk(LinkQueryGraph& graph, WalkEnsemble& ensemble, std::size_t j, Rng& rng);

/// ceil(c_burn * ln(|E| / delta) / (1 - lambda)).
std::int64_t burn_in_length(double lambda, double edges, double delta, double c_burn = kDefaultBurnInConstant);

/// n walks from the seed vertex, M steps each; costs exactly n * M neighborhood queries.
WalkEnsemble run_burn_in(LinkQueryGraph& graph, std::size_t walks, std::int64_t steps, Rng& rng, bool lazy = false);

/// n walks placed independently at the stationary law via LinkQueryGraph::admit.
WalkEnsemble stationary_ensemble(LinkQueryGraph& graph, const Topology& topology, std::size_t walks, Rng& rng,
                                 bool lazy = false);

/// D = (1/n) sum_j 1/deg(w_j), an estimate of 1/avg_degree; costs n degree queries.
double estimate_avg_degree(LinkQueryGraph& graph, const WalkEnsemble& ensemble);

struct SizeEstimate {
  /// Sum over rounds of (other walks at w_j) / deg(w_j).
  std::vector<double> weighted_collisions;
  /// avg_degree * sum_j c_j / (n (n - 1) t)
  double statistic = 0.0;
  /// 1 / statistic; absent when no collision occurred.
  std::optional<double> size;
  std::int64_t rounds = 0;
  double avg_degree = 0.0;
};

/// t synchronous rounds of degree-weighted collision counting; costs n * t
/// neighborhood queries and advances the ensemble in place.
SizeEstimate estimate_size(LinkQueryGraph& graph, WalkEnsemble& ensemble, std::int64_t rounds, double avg_degree,
                           Rng& rng);

/// Median with absent entries ordered as +infinity. Requires an odd count.
double median_boost(std::span<const std::optional<double>> estimates);

/// ceil(c_plan * max{ avg/(min eps^2 delta), sqrt(|V| B(t) avg / (t eps^2 delta)) }).
std::int64_t plan_walk_count(std::int64_t rounds, double b_t, const GraphStats& stats, double eps, double delta,
                             double size_guess, double c_plan = kDefaultPlanConstant);

struct PipelineConfig {
  Node seed_vertex = 0;
  std::size_t walks = 2;
  std::int64_t burn_in = 0;
  std::int64_t rounds = 1;
  std::size_t boost_runs = 1;
  std::uint64_t seed = 0;
  bool lazy = false;
};

struct PipelineRun {
  std::optional<double> size;
  double statistic = 0.0;
  double inverse_degree = 0.0;
  QueryCounters queries;
};

struct PipelineResult {
  std::optional<double> size;  // median over runs; absent only if every run failed
  std::vector<PipelineRun> runs;
  QueryCounters queries;
};

/// Burn-in, average-degree estimation and size estimation per run (run k seeded with
/// derive_seed(seed, k)), median over runs. Rejects bipartite graphs unless lazy.
PipelineResult run_pipeline(std::shared_ptr<const Topology> topology, const PipelineConfig& config,
                            unsigned threads = 0);

/// A single run of the pipeline with an explicit engine.
PipelineRun run_pipeline_once(std::shared_ptr<const Topology> topology, const PipelineConfig& config, Rng& rng);

}  // namespace census
