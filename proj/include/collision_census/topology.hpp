#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "collision_census/rng.hpp"

namespace census {

/// Dense node id in [0, node_count()).
///
/// Torus / ring: mixed-radix with dimension 0 fastest,
///   id = x_0 + s_0 * (x_1 + s_1 * (x_2 + ...)).
/// Hypercube: the k-bit string read as an unsigned integer (bit i = coordinate i).
/// Explicit: the ids used in the adjacency input.
using Node = std::int64_t;

enum class Family { torus, ring, hypercube, explicit_graph };

/// Input of build_topology. Only the fields of the selected family are read.
struct TopologySpec {
  Family family = Family::torus;
  std::vector<std::int64_t> sides;               // torus: one per dimension; ring: {A}
  int bits = 0;                                  // hypercube
  std::vector<std::vector<Node>> adjacency;      // explicit
};

/// Immutable finite undirected graph with uniform-neighbor stepping.
/// Safe for concurrent reads; random sources are supplied by the caller.
class Topology {
 public:
  static Topology torus(std::vector<std::int64_t> sides);
  static Topology ring(std::int64_t nodes);
  static Topology hypercube(int bits);
  static Topology from_adjacency(std::vector<std::vector<Node>> adjacency);
  static Topology from_edges(std::int64_t nodes, std::span<const std::pair<Node, Node>> edges);

  Family family() const noexcept { return family_; }
  std::int64_t node_count() const noexcept { return nodes_; }
  std::int64_t edge_count() const noexcept { return edges_; }
  /// Torus dimension count, 1 for rings, bit count for hypercubes, 0 for explicit graphs.
  int dimensions() const noexcept;
  std::span<const std::int64_t> sides() const noexcept { return sides_; }

  int degree(Node v) const;
  int max_degree() const noexcept { return max_degree_; }
  int min_degree() const noexcept { return min_degree_; }
  bool is_regular() const noexcept { return min_degree_ == max_degree_; }
  bool is_bipartite() const;

  /// Adjacent nodes in ascending id order.
  std::vector<Node> neighbors(Node v) const;

  /// Uniform neighbor of v using exactly one engine draw r = uniform_index(deg(v)).
  /// Torus/ring: dimension r / 2, direction +1 if r is even else -1.
  /// Hypercube: flip bit r. Explicit: r-th entry of the ascending neighbor list.
  Node random_step(Node v, Rng& rng) const;

  /// Node drawn with probability deg(v) / (2|E|) from one engine draw
  /// (uniform over nodes for regular graphs, uniform half-edge otherwise).
  Node stationary_sample(Rng& rng) const;

  /// Torus/ring translation of v by delta along dimension dim (wrapping).
  Node shift(Node v, int dim, std::int64_t delta) const;

  std::vector<std::int64_t> coordinates(Node v) const;
  Node node_at(std::span<const std::int64_t> coords) const;

  /// Short label such as "torus[16x16]", "ring[1024]", "hypercube[8]", "explicit[64,96]".
  std::string describe() const;

 private:
  Topology() = default;
  void check_node(Node v) const;
  void finish_regular(int degree);

  Family family_ = Family::torus;
  std::int64_t nodes_ = 0;
  std::int64_t edges_ = 0;
  int bits_ = 0;
  int min_degree_ = 0;
  int max_degree_ = 0;
  std::vector<std::int64_t> sides_;
  std::vector<std::int64_t> strides_;
  // CSR adjacency, explicit graphs only.
  std::vector<std::int64_t> offsets_;
  std::vector<Node> targets_;
};

Topology build_topology(const TopologySpec& spec);

/// Explicit convenience builders.
Topology complete_graph(std::int64_t nodes);
Topology star_graph(std::int64_t leaves);

/// Connected simple k-regular graph on `nodes` vertices from the pairing model,
/// redrawn until simple and connected (and non-bipartite when requested).
Topology random_regular_graph(std::int64_t nodes, int degree, Rng& rng, bool require_non_bipartite);

/// Edge-list text: first line "A |E|", then |E| lines "u v" (0-indexed).
/// '#' starts a comment; blank lines are ignored.
Topology read_edge_list(std::istream& in);
Topology load_edge_list(const std::string& path);

struct GraphStats {
  std::int64_t nodes = 0;
  std::int64_t edges = 0;
  /// Exact numerator of avg_degree: sum of degrees = 2|E|.
  std::int64_t degree_sum = 0;
  double avg_degree = 0.0;
  int min_degree = 0;
  int max_degree = 0;
};

GraphStats graph_stats(const Topology& topology);

enum class Spectrum {
  /// max{|lambda_2|, |lambda_A|}
  absolute,
  /// max{lambda_2, 0}: negative eigenvalues ignored (used for bipartite hypercubes).
  positive,
};

inline constexpr std::int64_t kSpectralGuard = 4096;

/// Second eigenvalue magnitude of the random walk matrix W = M / k of a regular graph,
/// from a dense symmetric eigensolve (accurate to about 1e-9 for A <= kSpectralGuard).
double spectral_lambda(const Topology& topology, Spectrum variant = Spectrum::absolute);

}  // namespace census
