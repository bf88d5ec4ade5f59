#include "collision_census/netsize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "collision_census/error.hpp"
#include "collision_census/occupancy.hpp"
#include "collision_census/parallel.hpp"

namespace census {

namespace {

// ceil that keeps exact integers steady under last-bit rounding noise.
std::int64_t stable_ceil(double x) { return static_cast<std::int64_t>(std::ceil(x * (1.0 - 1e-12))); }

}  // namespace

LinkQueryGraph::LinkQueryGraph(std::shared_ptr<const Topology> topology, Node seed_vertex)
    : topology_(std::move(topology)), seed_(seed_vertex) {
  if (!topology_) throw Error(Errc::precondition, "graph: missing topology");
  const auto n = topology_->node_count();
  if (seed_ < 0 || seed_ >= n) throw Error(Errc::node_out_of_range, "seed vertex " + std::to_string(seed_));
  offsets_.reserve(static_cast<std::size_t>(n) + 1);
  offsets_.push_back(0);
  for (Node v = 0; v < n; ++v) {
    const auto list = topology_->neighbors(v);
    targets_.insert(targets_.end(), list.begin(), list.end());
    offsets_.push_back(static_cast<std::int64_t>(targets_.size()));
  }
  reached_.assign(static_cast<std::size_t>(n), 0);
  ++counters_.bootstrap;
  reveal(seed_);
}

std::span<const Node> LinkQueryGraph::lookup(Node v) const noexcept {
  return {targets_.data() + offsets_[v], static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
}

std::span<const Node> LinkQueryGraph::reveal(Node v) {
  const auto list = lookup(v);
  reached_[v] = 1;
  for (const Node w : list) reached_[w] = 1;
  if (observer_) observer_(v, list);
  return list;
}

bool LinkQueryGraph::reached(Node v) const noexcept {
  return v >= 0 && v < static_cast<Node>(reached_.size()) && reached_[v];
}

std::span<const Node> LinkQueryGraph::neighborhood(Node v) {
  if (!reached(v)) throw Error(Errc::precondition, "vertex " + std::to_string(v) + " has not been reached");
  ++counters_.neighborhood;
  return reveal(v);
}

int LinkQueryGraph::degree(Node v) {
  if (!reached(v)) throw Error(Errc::precondition, "vertex " + std::to_string(v) + " has not been reached");
  ++counters_.degree;
  return static_cast<int>(lookup(v).size());
}

std::span<const Node> LinkQueryGraph::admit(Node v) {
  if (v < 0 || v >= static_cast<Node>(reached_.size())) throw Error(Errc::node_out_of_range, "admitted vertex");
  ++counters_.bootstrap;
  return reveal(v);
}

void advance_walk(LinkQueryGraph& graph, WalkEnsemble& ensemble, std::size_t j, Rng& rng) {
  const auto here = ensemble.neighborhoods[j];
  const auto deg = static_cast<std::uint64_t>(here.size());
  Node next = ensemble.positions[j];
  if (ensemble.lazy) {
    const auto r = uniform_index(rng, 2 * deg);
    if (r < deg) next = here[r];
  } else {
    next = here[uniform_index(rng, deg)];
  }
  ensemble.positions[j] = next;
  ensemble.neighborhoods[j] = graph.neighborhood(next);
}

std::int64_t burn_in_length(double lambda, double edges, double delta, double c_burn) {
  if (!(lambda >= 0.0)) throw Error(Errc::precondition, "lambda must lie in [0, 1)");
  if (lambda >= 1.0) throw Error(Errc::bipartite, "lambda = 1: bipartite or disconnected walk does not mix");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::precondition, "delta must lie in (0, 1)");
  if (!(c_burn > 0.0)) throw Error(Errc::precondition, "c_burn must be positive");
  if (!(edges > 0.0)) throw Error(Errc::precondition, "edge count must be positive");
  return std::max<std::int64_t>(0, stable_ceil(c_burn * std::log(edges / delta) / (1.0 - lambda)));
}

WalkEnsemble run_burn_in(LinkQueryGraph& graph, std::size_t walks, std::int64_t steps, Rng& rng, bool lazy) {
  if (walks < 2) throw Error(Errc::precondition, "walks: need n >= 2");
  if (steps < 0) throw Error(Errc::precondition, "burn-in length must be >= 0");
  WalkEnsemble e;
  e.positions.assign(walks, graph.seed_vertex());
  e.neighborhoods.assign(walks, graph.seed_neighborhood());
  e.burn_in = steps;
  e.lazy = lazy;
  for (std::int64_t s = 0; s < steps; ++s)
    for (std::size_t j = 0; j < walks; ++j) advance_walk(graph, e, j, rng);
  return e;
}

WalkEnsemble stationary_ensemble(LinkQueryGraph& graph, const Topology& topology, std::size_t walks, Rng& rng,
                                 bool lazy) {
  if (walks < 2) throw Error(Errc::precondition, "walks: need n >= 2");
  WalkEnsemble e;
  e.lazy = lazy;
  for (std::size_t j = 0; j < walks; ++j) {
    const Node v = topology.stationary_sample(rng);
    e.positions.push_back(v);
    e.neighborhoods.push_back(graph.admit(v));
  }
  return e;
}

double estimate_avg_degree(LinkQueryGraph& graph, const WalkEnsemble& ensemble) {
  if (ensemble.size() < 1) throw Error(Errc::precondition, "walks: need n >= 1");
  // Grouped by degree so that a regular graph yields exactly 1/k.
  std::map<int, std::size_t> by_degree;
  for (const Node w : ensemble.positions) ++by_degree[graph.degree(w)];
  const double n = static_cast<double>(ensemble.size());
  double sum = 0.0;
  for (const auto& [deg, count] : by_degree) sum += (static_cast<double>(count) / n) / deg;
  return sum;
}

SizeEstimate estimate_size(LinkQueryGraph& graph, WalkEnsemble& ensemble, std::int64_t rounds, double avg_degree,
                           Rng& rng) {
  const auto n = ensemble.size();
  if (n < 2) throw Error(Errc::precondition, "walks: need n >= 2");
  if (rounds < 1) throw Error(Errc::precondition, "rounds: need t >= 1");
  if (!(avg_degree > 0.0)) throw Error(Errc::precondition, "avg_degree must be positive");

  SizeEstimate out;
  out.rounds = rounds;
  out.avg_degree = avg_degree;
  out.weighted_collisions.assign(n, 0.0);
  OccupancyMap occupancy(n);
  for (std::int64_t r = 1; r <= rounds; ++r) {
    for (std::size_t j = 0; j < n; ++j) advance_walk(graph, ensemble, j, rng);
    occupancy.clear();
    for (const Node w : ensemble.positions) occupancy.add(w);
    for (std::size_t j = 0; j < n; ++j) {
      const auto others = occupancy.total(ensemble.positions[j]) - 1;
      if (others > 0) out.weighted_collisions[j] += static_cast<double>(others) / ensemble.degree(j);
    }
  }
  double total = 0.0;
  for (const double c : out.weighted_collisions) total += c;
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  out.statistic = avg_degree * total / (pairs * static_cast<double>(rounds));
  if (out.statistic > 0.0) out.size = 1.0 / out.statistic;
  return out;
}

double median_boost(std::span<const std::optional<double>> estimates) {
  if (estimates.empty() || estimates.size() % 2 == 0)
    throw Error(Errc::precondition, "median boosting needs an odd number of runs");
  std::vector<double> values;
  values.reserve(estimates.size());
  for (const auto& e : estimates) values.push_back(e ? *e : std::numeric_limits<double>::infinity());
  if (std::none_of(estimates.begin(), estimates.end(), [](const auto& e) { return e.has_value(); }))
    throw Error(Errc::all_absent, "every boosted run failed");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

std::int64_t plan_walk_count(std::int64_t rounds, double b_t, const GraphStats& stats, double eps, double delta,
                             double size_guess, double c_plan) {
  if (rounds < 1 || !(b_t > 0) || !(eps > 0) || !(delta > 0) || !(size_guess > 0) || !(c_plan > 0) ||
      stats.min_degree < 1)
    throw Error(Errc::precondition, "plan_walk_count parameters must be positive");
  const double scale = eps * eps * delta;
  const double degree_term = stats.avg_degree / (stats.min_degree * scale);
  const double collision_term = std::sqrt(size_guess * b_t * stats.avg_degree / (static_cast<double>(rounds) * scale));
  return stable_ceil(c_plan * std::max(degree_term, collision_term));
}

PipelineRun run_pipeline_once(std::shared_ptr<const Topology> topology, const PipelineConfig& config, Rng& rng) {
  LinkQueryGraph graph(std::move(topology), config.seed_vertex);
  auto ensemble = run_burn_in(graph, config.walks, config.burn_in, rng, config.lazy);
  const double inverse_degree = estimate_avg_degree(graph, ensemble);
  const auto estimate = estimate_size(graph, ensemble, config.rounds, 1.0 / inverse_degree, rng);
  return {estimate.size, estimate.statistic, inverse_degree, graph.counters()};
}

PipelineResult run_pipeline(std::shared_ptr<const Topology> topology, const PipelineConfig& config, unsigned threads) {
  if (!topology) throw Error(Errc::precondition, "graph: missing topology");
  if (!config.lazy && topology->is_bipartite())
    throw Error(Errc::bipartite, topology->describe() + " is bipartite; enable the lazy walk to proceed");
  if (config.boost_runs < 1 || config.boost_runs % 2 == 0)
    throw Error(Errc::precondition, "boost_runs: must be odd and >= 1");
  if (config.walks < 2) throw Error(Errc::precondition, "walks: need n >= 2");
  if (config.rounds < 1) throw Error(Errc::precondition, "rounds: need t >= 1");

  PipelineResult out;
  out.runs = parallel_map<PipelineRun>(config.boost_runs, threads, [&](std::size_t k) {
    Rng rng(derive_seed(config.seed, k));
    return run_pipeline_once(topology, config, rng);
  });
  std::vector<std::optional<double>> sizes;
  for (const auto& run : out.runs) {
    sizes.push_back(run.size);
    out.queries += run.queries;
  }
  if (std::any_of(sizes.begin(), sizes.end(), [](const auto& s) { return s.has_value(); })) {
    const double median = median_boost(sizes);
    if (std::isfinite(median)) out.size = median;
  }
  return out;
}

}  // namespace census
