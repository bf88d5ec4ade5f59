#include "collision_census/topology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>

#include "collision_census/error.hpp"

namespace census {

namespace {

bool connected(std::span<const std::int64_t> offsets, std::span<const Node> targets, std::int64_t n) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Node> stack{0};
  seen[0] = 1;
  std::int64_t reached = 1;
  while (!stack.empty()) {
    const Node v = stack.back();
    stack.pop_back();
    for (auto e = offsets[v]; e < offsets[v + 1]; ++e) {
      const Node w = targets[e];
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

}  // namespace

Topology Topology::torus(std::vector<std::int64_t> sides) {
  if (sides.empty()) throw Error(Errc::invalid_dimension, "torus needs at least one dimension");
  Topology t;
  t.family_ = Family::torus;
  t.nodes_ = 1;
  for (const auto s : sides) {
    if (s < 3) throw Error(Errc::invalid_side, "torus side length must be >= 3, got " + std::to_string(s));
    t.strides_.push_back(t.nodes_);
    t.nodes_ *= s;
  }
  t.sides_ = std::move(sides);
  const int k = static_cast<int>(t.sides_.size());
  t.edges_ = t.nodes_ * k;
  t.finish_regular(2 * k);
  return t;
}

Topology Topology::ring(std::int64_t nodes) {
  if (nodes < 3) throw Error(Errc::invalid_side, "ring needs >= 3 nodes, got " + std::to_string(nodes));
  Topology t = torus({nodes});
  t.family_ = Family::ring;
  return t;
}

Topology Topology::hypercube(int bits) {
  if (bits < 1) throw Error(Errc::invalid_dimension, "hypercube needs k >= 1, got " + std::to_string(bits));
  if (bits > 40) throw Error(Errc::invalid_dimension, "hypercube k > 40 is not supported");
  Topology t;
  t.family_ = Family::hypercube;
  t.bits_ = bits;
  t.nodes_ = std::int64_t{1} << bits;
  t.edges_ = t.nodes_ * bits / 2;
  t.finish_regular(bits);
  return t;
}

Topology Topology::from_adjacency(std::vector<std::vector<Node>> adjacency) {
  const auto n = static_cast<std::int64_t>(adjacency.size());
  if (n < 2) throw Error(Errc::precondition, "explicit graph needs at least 2 nodes");
  Topology t;
  t.family_ = Family::explicit_graph;
  t.nodes_ = n;
  t.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Node v = 0; v < n; ++v) {
    auto& list = adjacency[v];
    std::sort(list.begin(), list.end());
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Node w = list[i];
      if (w < 0 || w >= n)
        throw Error(Errc::node_out_of_range, "neighbor " + std::to_string(w) + " of node " + std::to_string(v));
      if (w == v) throw Error(Errc::self_loop, "self-loop at node " + std::to_string(v));
      if (i > 0 && list[i - 1] == w)
        throw Error(Errc::parallel_edge, "parallel edge " + std::to_string(v) + "-" + std::to_string(w));
    }
    t.offsets_[v + 1] = t.offsets_[v] + static_cast<std::int64_t>(list.size());
  }
  t.targets_.reserve(static_cast<std::size_t>(t.offsets_.back()));
  for (const auto& list : adjacency) t.targets_.insert(t.targets_.end(), list.begin(), list.end());
  for (Node v = 0; v < n; ++v) {
    for (const Node w : adjacency[v]) {
      if (!std::binary_search(adjacency[w].begin(), adjacency[w].end(), v))
        throw Error(Errc::asymmetric, "edge " + std::to_string(v) + "->" + std::to_string(w) + " has no reverse");
    }
  }
  if (!connected(t.offsets_, t.targets_, n)) throw Error(Errc::disconnected, "explicit graph is not connected");
  t.edges_ = t.offsets_.back() / 2;
  t.min_degree_ = std::numeric_limits<int>::max();
  for (Node v = 0; v < n; ++v) {
    const int d = static_cast<int>(t.offsets_[v + 1] - t.offsets_[v]);
    t.min_degree_ = std::min(t.min_degree_, d);
    t.max_degree_ = std::max(t.max_degree_, d);
  }
  return t;
}

Topology Topology::from_edges(std::int64_t nodes, std::span<const std::pair<Node, Node>> edges) {
  if (nodes < 0) throw Error(Errc::precondition, "negative node count");
  std::vector<std::vector<Node>> adjacency(static_cast<std::size_t>(nodes));
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= nodes || v < 0 || v >= nodes)
      throw Error(Errc::node_out_of_range, "edge " + std::to_string(u) + " " + std::to_string(v));
    adjacency[u].push_back(v);
    if (u != v) adjacency[v].push_back(u);
  }
  return from_adjacency(std::move(adjacency));
}

void Topology::finish_regular(int degree) {
  min_degree_ = degree;
  max_degree_ = degree;
}

int Topology::dimensions() const noexcept {
  switch (family_) {
    case Family::torus:
    case Family::ring: return static_cast<int>(sides_.size());
    case Family::hypercube: return bits_;
    case Family::explicit_graph: return 0;
  }
  return 0;
}

void Topology::check_node(Node v) const {
  if (v < 0 || v >= nodes_)
    throw Error(Errc::node_out_of_range, "node " + std::to_string(v) + " not in [0, " + std::to_string(nodes_) + ")");
}

int Topology::degree(Node v) const {
  check_node(v);
  if (family_ == Family::explicit_graph) return static_cast<int>(offsets_[v + 1] - offsets_[v]);
  return max_degree_;
}

bool Topology::is_bipartite() const {
  switch (family_) {
    case Family::torus:
    case Family::ring:
      return std::all_of(sides_.begin(), sides_.end(), [](std::int64_t s) { return s % 2 == 0; });
    case Family::hypercube: return true;
    case Family::explicit_graph: break;
  }
  std::vector<int> color(static_cast<std::size_t>(nodes_), -1);
  std::vector<Node> stack{0};
  color[0] = 0;
  while (!stack.empty()) {
    const Node v = stack.back();
    stack.pop_back();
    for (auto e = offsets_[v]; e < offsets_[v + 1]; ++e) {
      const Node w = targets_[e];
      if (color[w] < 0) {
        color[w] = 1 - color[v];
        stack.push_back(w);
      } else if (color[w] == color[v]) {
        return false;
      }
    }
  }
  return true;
}

std::vector<Node> Topology::neighbors(Node v) const {
  check_node(v);
  std::vector<Node> out;
  switch (family_) {
    case Family::torus:
    case Family::ring:
      out.reserve(2 * sides_.size());
      for (int d = 0; d < static_cast<int>(sides_.size()); ++d) {
        out.push_back(shift(v, d, 1));
        out.push_back(shift(v, d, -1));
      }
      std::sort(out.begin(), out.end());
      break;
    case Family::hypercube:
      for (int b = 0; b < bits_; ++b) out.push_back(v ^ (Node{1} << b));
      std::sort(out.begin(), out.end());
      break;
    case Family::explicit_graph:
      out.assign(targets_.begin() + offsets_[v], targets_.begin() + offsets_[v + 1]);
      break;
  }
  return out;
}

Node Topology::random_step(Node v, Rng& rng) const {
  check_node(v);
  switch (family_) {
    case Family::torus:
    case Family::ring: {
      const auto r = uniform_index(rng, static_cast<std::uint64_t>(max_degree_));
      return shift(v, static_cast<int>(r >> 1), (r & 1) ? -1 : 1);
    }
    case Family::hypercube:
      return v ^ (Node{1} << uniform_index(rng, static_cast<std::uint64_t>(bits_)));
    case Family::explicit_graph: {
      const auto deg = static_cast<std::uint64_t>(offsets_[v + 1] - offsets_[v]);
      return targets_[offsets_[v] + static_cast<std::int64_t>(uniform_index(rng, deg))];
    }
  }
  return v;
}

Node Topology::stationary_sample(Rng& rng) const {
  if (is_regular()) return static_cast<Node>(uniform_index(rng, static_cast<std::uint64_t>(nodes_)));
  const auto half_edge = static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(offsets_.back())));
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), half_edge);
  return static_cast<Node>(std::distance(offsets_.begin(), it) - 1);
}

Node Topology::shift(Node v, int dim, std::int64_t delta) const {
  if (family_ != Family::torus && family_ != Family::ring)
    throw Error(Errc::precondition, "shift is defined for tori and rings only");
  if (dim < 0 || dim >= static_cast<int>(sides_.size()))
    throw Error(Errc::invalid_dimension, "dimension " + std::to_string(dim));
  const auto side = sides_[dim];
  const auto stride = strides_[dim];
  const auto x = (v / stride) % side;
  auto y = (x + delta) % side;
  if (y < 0) y += side;
  return v + (y - x) * stride;
}

std::vector<std::int64_t> Topology::coordinates(Node v) const {
  check_node(v);
  std::vector<std::int64_t> out;
  if (family_ == Family::hypercube) {
    for (int b = 0; b < bits_; ++b) out.push_back((v >> b) & 1);
  } else if (family_ == Family::explicit_graph) {
    out.push_back(v);
  } else {
    for (std::size_t d = 0; d < sides_.size(); ++d) out.push_back((v / strides_[d]) % sides_[d]);
  }
  return out;
}

Node Topology::node_at(std::span<const std::int64_t> coords) const {
  Node v = 0;
  if (family_ == Family::hypercube) {
    if (static_cast<int>(coords.size()) != bits_) throw Error(Errc::invalid_dimension, "coordinate count");
    for (int b = 0; b < bits_; ++b) v |= (coords[b] & 1) << b;
    return v;
  }
  if (family_ == Family::explicit_graph) {
    if (coords.size() != 1) throw Error(Errc::invalid_dimension, "coordinate count");
    check_node(coords[0]);
    return coords[0];
  }
  if (coords.size() != sides_.size()) throw Error(Errc::invalid_dimension, "coordinate count");
  for (std::size_t d = 0; d < sides_.size(); ++d) {
    auto x = coords[d] % sides_[d];
    if (x < 0) x += sides_[d];
    v += x * strides_[d];
  }
  return v;
}

std::string Topology::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::torus:
      os << "torus[";
      for (std::size_t d = 0; d < sides_.size(); ++d) os << (d ? "x" : "") << sides_[d];
      os << ']';
      break;
    case Family::ring: os << "ring[" << nodes_ << ']'; break;
    case Family::hypercube: os << "hypercube[" << bits_ << ']'; break;
    case Family::explicit_graph: os << "explicit[" << nodes_ << ',' << edges_ << ']'; break;
  }
  return os.str();
}

Topology build_topology(const TopologySpec& spec) {
  switch (spec.family) {
    case Family::torus: return Topology::torus(spec.sides);
    case Family::ring:
      if (spec.sides.size() != 1) throw Error(Errc::invalid_dimension, "ring takes one side length");
      return Topology::ring(spec.sides[0]);
    case Family::hypercube: return Topology::hypercube(spec.bits);
    case Family::explicit_graph: return Topology::from_adjacency(spec.adjacency);
  }
  throw Error(Errc::unknown_family, "unknown topology family");
}

Topology complete_graph(std::int64_t nodes) {
  std::vector<std::vector<Node>> adjacency(static_cast<std::size_t>(std::max<std::int64_t>(nodes, 0)));
  for (Node v = 0; v < nodes; ++v)
    for (Node w = 0; w < nodes; ++w)
      if (v != w) adjacency[v].push_back(w);
  return Topology::from_adjacency(std::move(adjacency));
}

Topology star_graph(std::int64_t leaves) {
  std::vector<std::vector<Node>> adjacency(static_cast<std::size_t>(std::max<std::int64_t>(leaves, 0) + 1));
  for (Node leaf = 1; leaf <= leaves; ++leaf) {
    adjacency[0].push_back(leaf);
    adjacency[leaf].push_back(0);
  }
  return Topology::from_adjacency(std::move(adjacency));
}

Topology random_regular_graph(std::int64_t nodes, int degree, Rng& rng, bool require_non_bipartite) {
  if (nodes < 2 || degree < 1 || degree >= nodes || (nodes * degree) % 2 != 0)
    throw Error(Errc::precondition, "no simple " + std::to_string(degree) + "-regular graph on " +
                                        std::to_string(nodes) + " nodes");
  std::vector<Node> stubs;
  for (Node v = 0; v < nodes; ++v)
    for (int i = 0; i < degree; ++i) stubs.push_back(v);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (std::size_t i = stubs.size(); i > 1; --i)
      std::swap(stubs[i - 1], stubs[uniform_index(rng, i)]);
    std::vector<std::vector<Node>> adjacency(static_cast<std::size_t>(nodes));
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
      const Node u = stubs[i];
      const Node v = stubs[i + 1];
      if (u == v || std::find(adjacency[u].begin(), adjacency[u].end(), v) != adjacency[u].end()) {
        simple = false;
        break;
      }
      adjacency[u].push_back(v);
      adjacency[v].push_back(u);
    }
    if (!simple) continue;
    try {
      Topology t = Topology::from_adjacency(std::move(adjacency));
      if (require_non_bipartite && t.is_bipartite()) continue;
      return t;
    } catch (const Error& e) {
      if (e.code() != Errc::disconnected) throw;
    }
  }
  throw Error(Errc::precondition, "pairing model failed to produce a simple connected graph");
}

Topology read_edge_list(std::istream& in) {
  std::string line;
  std::int64_t nodes = -1;
  std::int64_t expected = -1;
  std::vector<std::pair<Node, Node>> edges;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::int64_t a = 0;
    std::int64_t b = 0;
    if (!(fields >> a)) continue;
    if (!(fields >> b)) throw Error(Errc::parse, "line " + std::to_string(line_no) + ": expected two integers");
    std::string rest;
    if (fields >> rest) throw Error(Errc::parse, "line " + std::to_string(line_no) + ": trailing text");
    if (nodes < 0) {
      nodes = a;
      expected = b;
      if (nodes < 0 || expected < 0) throw Error(Errc::parse, "negative header counts");
    } else {
      edges.emplace_back(a, b);
    }
  }
  if (nodes < 0) throw Error(Errc::parse, "missing 'A |E|' header");
  if (static_cast<std::int64_t>(edges.size()) != expected)
    throw Error(Errc::parse, "header announces " + std::to_string(expected) + " edges, found " +
                                 std::to_string(edges.size()));
  return Topology::from_edges(nodes, edges);
}

Topology load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

GraphStats graph_stats(const Topology& topology) {
  GraphStats s;
  s.nodes = topology.node_count();
  s.edges = topology.edge_count();
  s.degree_sum = 2 * s.edges;
  s.avg_degree = static_cast<double>(s.degree_sum) / static_cast<double>(s.nodes);
  s.min_degree = topology.min_degree();
  s.max_degree = topology.max_degree();
  return s;
}

}  // namespace census
