#include <doctest.h>

#include <set>
#include <sstream>

#include "collision_census/error.hpp"
#include "collision_census/topology.hpp"
#include "support.hpp"

using namespace census;
using namespace census::testing;

namespace {

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected census::Error");
  return Errc::precondition;
}

std::vector<Topology> sample_topologies() {
  Rng rng(5);
  std::vector<Topology> out;
  out.push_back(Topology::torus({4, 4}));
  out.push_back(Topology::torus({3, 5, 4}));
  out.push_back(Topology::ring(7));
  out.push_back(Topology::hypercube(5));
  out.push_back(complete_graph(6));
  out.push_back(star_graph(3));
  out.push_back(random_regular_graph(20, 3, rng, false));
  out.push_back(wagner_graph());
  return out;
}

}  // namespace

TEST_CASE("build_topology examples") {
  const auto torus = build_topology({Family::torus, {4, 4}});
  CHECK(torus.node_count() == 16);
  for (Node v = 0; v < 16; ++v) CHECK(torus.degree(v) == 4);

  TopologySpec cube_spec;
  cube_spec.family = Family::hypercube;
  cube_spec.bits = 3;
  const auto cube = build_topology(cube_spec);
  CHECK(cube.node_count() == 8);
  for (Node v = 0; v < 8; ++v) CHECK(cube.degree(v) == 3);

  TopologySpec tri_spec;
  tri_spec.family = Family::explicit_graph;
  tri_spec.adjacency = {{1, 2}, {0, 2}, {0, 1}};
  const auto triangle = build_topology(tri_spec);
  CHECK(triangle.node_count() == 3);
  CHECK(triangle.edge_count() == 3);
}

TEST_CASE("build_topology rejects invalid input with distinct codes") {
  CHECK(error_of([] { Topology::torus({2, 5}); }) == Errc::invalid_side);
  CHECK(error_of([] { Topology::torus({}); }) == Errc::invalid_dimension);
  CHECK(error_of([] { Topology::hypercube(0); }) == Errc::invalid_dimension);
  CHECK(error_of([] { Topology::ring(2); }) == Errc::invalid_side);
  CHECK(error_of([] { Topology::from_adjacency({{1}, {0}, {3}, {2}}); }) == Errc::disconnected);
  CHECK(error_of([] { Topology::from_adjacency({{1, 2}, {0}, {}}); }) == Errc::asymmetric);
  CHECK(error_of([] { Topology::from_adjacency({{0, 1}, {0}}); }) == Errc::self_loop);
  CHECK(error_of([] { Topology::from_adjacency({{1, 1}, {0, 0}}); }) == Errc::parallel_edge);
  CHECK(error_of([] { Topology::from_adjacency({{5}, {0}}); }) == Errc::node_out_of_range);
}

TEST_CASE("neighbors examples") {
  CHECK(Topology::ring(5).neighbors(0) == std::vector<Node>{1, 4});
  CHECK(Topology::hypercube(2).neighbors(0b00) == std::vector<Node>{0b01, 0b10});

  const auto t = Topology::torus({4, 4});
  const std::int64_t origin[] = {0, 0};
  std::vector<Node> expected;
  for (const auto& c : std::vector<std::vector<std::int64_t>>{{1, 0}, {3, 0}, {0, 1}, {0, 3}})
    expected.push_back(t.node_at(c));
  std::sort(expected.begin(), expected.end());
  CHECK(t.neighbors(t.node_at(origin)) == expected);
  CHECK(expected == std::vector<Node>{1, 3, 4, 12});

  CHECK(error_of([&] { t.neighbors(16); }) == Errc::node_out_of_range);
  CHECK(error_of([&] { t.neighbors(-1); }) == Errc::node_out_of_range);
}

TEST_CASE("coordinate bijection round-trips") {
  for (const auto& t : sample_topologies()) {
    for (Node v = 0; v < t.node_count(); ++v) {
      const auto c = t.coordinates(v);
      CHECK(t.node_at(c) == v);
    }
  }
  const auto t = Topology::torus({3, 5, 4});
  const std::int64_t coords[] = {2, 4, 3};
  CHECK(t.node_at(coords) == 2 + 3 * (4 + 5 * 3));
}

TEST_CASE("handshake and symmetry hold for every family") {
  for (const auto& t : sample_topologies()) {
    std::int64_t degree_sum = 0;
    for (Node v = 0; v < t.node_count(); ++v) {
      const auto nbrs = t.neighbors(v);
      CHECK(static_cast<int>(nbrs.size()) == t.degree(v));
      CHECK(std::is_sorted(nbrs.begin(), nbrs.end()));
      CHECK(std::set<Node>(nbrs.begin(), nbrs.end()).size() == nbrs.size());
      degree_sum += t.degree(v);
      for (const Node w : nbrs) {
        const auto back = t.neighbors(w);
        CHECK(std::binary_search(back.begin(), back.end(), v));
      }
    }
    CHECK(degree_sum == 2 * t.edge_count());
  }
}

TEST_CASE("random_step picks each torus direction uniformly") {
  const auto t = Topology::torus({100, 100});
  Rng rng(17);
  const Node v = 4242;
  const auto nbrs = t.neighbors(v);
  std::map<Node, std::int64_t> hits;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hits[t.random_step(v, rng)];
  CHECK(hits.size() == 4);
  const double se = std::sqrt(0.25 * 0.75 / draws);
  for (const Node w : nbrs) CHECK(std::abs(hits[w] / double(draws) - 0.25) < 5 * se);
}

TEST_CASE("random_step marginals are 1/deg on an irregular graph") {
  const auto star = star_graph(3);
  Rng rng(3);
  std::map<Node, std::int64_t> hits;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hits[star.random_step(0, rng)];
  const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / draws);
  for (Node leaf = 1; leaf <= 3; ++leaf) CHECK(std::abs(hits[leaf] / double(draws) - 1.0 / 3) < 5 * se);
  // A leaf has one neighbor.
  for (int i = 0; i < 50; ++i) CHECK(star.random_step(2, rng) == 0);
}

TEST_CASE("random_step is reproducible and uses one draw per step") {
  const auto t = Topology::hypercube(6);
  Rng a(99), b(99), c(99);
  Node va = 0, vb = 0;
  for (int i = 0; i < 1000; ++i) {
    va = t.random_step(va, a);
    vb = t.random_step(vb, b);
    CHECK(va == vb);
  }
  c.discard(1000);
  CHECK(a() == c());
}

TEST_CASE("stationary_sample is uniform on regular families") {
  const auto t = Topology::torus({10, 10});
  Rng rng(2024);
  std::vector<std::int64_t> counts(100, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[t.stationary_sample(rng)];
  // chi-square 0.999 quantile with 99 degrees of freedom
  CHECK(chi_square(counts, std::vector<double>(100, draws / 100.0)) < 148.23);
}

TEST_CASE("stationary_sample is degree-proportional") {
  const auto star = star_graph(3);
  Rng rng(8);
  const int draws = 100000;
  std::vector<std::int64_t> counts(4, 0);
  for (int i = 0; i < draws; ++i) ++counts[star.stationary_sample(rng)];
  const double se_center = std::sqrt(0.25 / draws);
  CHECK(std::abs(counts[0] / double(draws) - 0.5) < 5 * se_center);
  const double se_leaf = std::sqrt((1.0 / 6) * (5.0 / 6) / draws);
  for (int leaf = 1; leaf <= 3; ++leaf) CHECK(std::abs(counts[leaf] / double(draws) - 1.0 / 6) < 5 * se_leaf);

  const auto k2 = complete_graph(2);
  std::int64_t zero = 0;
  for (int i = 0; i < draws; ++i) zero += k2.stationary_sample(rng) == 0;
  CHECK(std::abs(zero / double(draws) - 0.5) < 5 * std::sqrt(0.25 / draws));
}

TEST_CASE("spectral_lambda examples") {
  for (const int a : {3, 5, 17}) CHECK(spectral_lambda(complete_graph(a)) == doctest::Approx(1.0 / (a - 1)).epsilon(1e-8));
  CHECK(spectral_lambda(Topology::ring(4)) == doctest::Approx(1.0).epsilon(1e-9));
  for (const int k : {3, 6, 8}) {
    CHECK(spectral_lambda(Topology::hypercube(k)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(spectral_lambda(Topology::hypercube(k), Spectrum::positive) == doctest::Approx(1.0 - 2.0 / k).epsilon(1e-9));
  }
  // Odd cycle: max |cos(2 pi j / 5)| = cos(pi / 5).
  CHECK(spectral_lambda(Topology::ring(5)) == doctest::Approx(std::cos(M_PI / 5)).epsilon(1e-9));
  CHECK(error_of([] { spectral_lambda(star_graph(3)); }) == Errc::irregular_graph);
  CHECK(error_of([] { spectral_lambda(Topology::ring(5000)); }) == Errc::size_guard);
}

TEST_CASE("graph_stats examples") {
  const auto s = graph_stats(Topology::torus({10, 10}));
  CHECK(s.nodes == 100);
  CHECK(s.avg_degree == 4.0);
  CHECK(s.min_degree == 4);
  CHECK(s.max_degree == 4);

  const auto star = graph_stats(star_graph(3));
  CHECK(star.avg_degree == 1.5);
  CHECK(star.min_degree == 1);
  CHECK(star.max_degree == 3);
  CHECK(star.degree_sum == 6);

  const auto k2 = graph_stats(complete_graph(2));
  CHECK(k2.edges == 1);
  CHECK(k2.avg_degree == 1.0);

  for (const auto& t : sample_topologies()) {
    const auto g = graph_stats(t);
    CHECK(g.min_degree <= g.avg_degree);
    CHECK(g.avg_degree <= g.max_degree);
    CHECK(g.degree_sum == 2 * g.edges);
  }
}

TEST_CASE("bipartiteness") {
  CHECK(Topology::torus({4, 6}).is_bipartite());
  CHECK_FALSE(Topology::torus({4, 5}).is_bipartite());
  CHECK(Topology::hypercube(4).is_bipartite());
  CHECK(star_graph(3).is_bipartite());
  CHECK_FALSE(complete_graph(3).is_bipartite());
  CHECK_FALSE(wagner_graph().is_bipartite());
}

TEST_CASE("edge-list reader") {
  std::istringstream good("# triangle plus tail\n4 4\n0 1\n1 2 # chord\n2 0\n\n2 3\n");
  const auto t = read_edge_list(good);
  CHECK(t.node_count() == 4);
  CHECK(t.edge_count() == 4);
  CHECK(t.neighbors(2) == std::vector<Node>{0, 1, 3});

  std::istringstream short_list("3 3\n0 1\n1 2\n");
  CHECK(error_of([&] { read_edge_list(short_list); }) == Errc::parse);
  std::istringstream bad_line("2 1\n0\n");
  CHECK(error_of([&] { read_edge_list(bad_line); }) == Errc::parse);
  std::istringstream duplicate("2 2\n0 1\n1 0\n");
  CHECK(error_of([&] { read_edge_list(duplicate); }) == Errc::parallel_edge);
  CHECK(error_of([] { load_edge_list("/nonexistent/graph.txt"); }) == Errc::parse);
}

TEST_CASE("random regular graphs are simple, connected and regular") {
  Rng rng(11);
  for (int i = 0; i < 5; ++i) {
    const auto g = random_regular_graph(64, 3, rng, true);
    CHECK(g.node_count() == 64);
    CHECK(g.is_regular());
    CHECK(g.max_degree() == 3);
    CHECK_FALSE(g.is_bipartite());
  }
  CHECK(error_of([&] { random_regular_graph(5, 3, rng, false); }) == Errc::precondition);
}
