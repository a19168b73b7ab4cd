#include <doctest.h>

#include <set>
#include <stdexcept>

#include "pcosync/topology.hpp"

using namespace pcosync;

namespace {

Vec uniform_coupling(int n, double l) { return Vec::Constant(n, l); }

NetworkTopology fig1c_tree() {
  Vec l(10);
  l << 0.6, 0.5, 0.4, 0.6, 0.5, 0.4, 0.6, 0.5, 0.4, 0.6;
  return NetworkTopology::directed_tree({0, 1, 1, 2, 2, 3, 4, 4, 6, 7}, l);
}

}  // namespace

TEST_CASE("chain out-neighbors") {
  const auto u = NetworkTopology::undirected_chain(6, uniform_coupling(6, 0.5));
  CHECK(u.out_neighbors(3) == std::vector<int>{2, 4});
  CHECK(u.out_neighbors(1) == std::vector<int>{2});
  CHECK(u.out_neighbors(6) == std::vector<int>{5});

  const auto d = NetworkTopology::directed_chain(6, uniform_coupling(6, 0.5));
  CHECK(d.out_neighbors(3) == std::vector<int>{4});
  CHECK(d.out_neighbors(6).empty());

  CHECK_THROWS_AS(u.out_neighbors(0), std::domain_error);
  CHECK_THROWS_AS(u.out_neighbors(7), std::domain_error);
}

TEST_CASE("ten-node tree matches the reference structure") {
  const auto t = fig1c_tree();
  CHECK(t.out_neighbors(4) == std::vector<int>{7, 8});
  CHECK(t.out_neighbors(1) == std::vector<int>{2, 3});
  CHECK(t.root() == 1);

  const auto chains = t.decompose_tree();
  REQUIRE(chains.size() == 4);
  CHECK(chains[0] == std::vector<int>{1, 2, 5});
  CHECK(chains[1] == std::vector<int>{1, 2, 4, 8});
  CHECK(chains[2] == std::vector<int>{1, 3, 6, 9});
  CHECK(chains[3] == std::vector<int>{1, 2, 4, 7, 10});
}

TEST_CASE("degenerate decompositions") {
  const auto chain = NetworkTopology::directed_chain(4, uniform_coupling(4, 0.5));
  CHECK(chain.decompose_tree() == std::vector<std::vector<int>>{{1, 2, 3, 4}});

  const auto single = NetworkTopology::directed_tree({0}, uniform_coupling(1, 0.5));
  CHECK(single.decompose_tree() == std::vector<std::vector<int>>{{1}});

  const auto u = NetworkTopology::undirected_chain(3, uniform_coupling(3, 0.5));
  CHECK_THROWS_AS(u.decompose_tree(), std::domain_error);
}

TEST_CASE("decomposed chains reproduce the tree edge set") {
  const auto t = fig1c_tree();
  std::set<std::pair<int, int>> from_chains;
  for (const auto& chain : t.decompose_tree()) {
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
      from_chains.insert({chain[i], chain[i + 1]});
    }
  }
  std::set<std::pair<int, int>> from_topo;
  for (int i = 1; i <= t.n(); ++i) {
    for (int j : t.out_neighbors(i)) from_topo.insert({i, j});
  }
  CHECK(from_chains == from_topo);
}

TEST_CASE("validation rejects bad inputs") {
  Vec bad(3);
  bad << 0.5, 0.5, 1.2;
  CHECK_THROWS_AS(NetworkTopology::directed_chain(3, bad),
                  std::invalid_argument);
  CHECK_THROWS_AS(NetworkTopology::directed_chain(3, uniform_coupling(2, 0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(NetworkTopology::undirected_chain(0, Vec{}),
                  std::invalid_argument);
  // cycle 1->2->3->1 has no root
  CHECK_THROWS_AS(NetworkTopology::directed_tree({3, 1, 2},
                                                 uniform_coupling(3, 0.5)),
                  std::invalid_argument);
  // two roots
  CHECK_THROWS_AS(NetworkTopology::directed_tree({0, 0, 1},
                                                 uniform_coupling(3, 0.5)),
                  std::invalid_argument);
  // self edge
  CHECK_THROWS_AS(NetworkTopology::directed_tree({0, 2, 1},
                                                 uniform_coupling(3, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("build_topology reproduces the experiment graphs") {
  Vec l6(6);
  l6 << 0.4, 0.5, 0.6, 0.6, 0.5, 0.4;
  const auto u = build_topology(TopologyKind::UndirectedChain, 6, l6);
  CHECK(u.n() == 6);
  CHECK(u.coupling(3) == 0.6);
  for (int i = 2; i <= 5; ++i) CHECK(u.out_neighbors(i).size() == 2);
  CHECK(u.out_neighbors(1).size() == 1);
  CHECK(u.out_neighbors(6).size() == 1);

  CHECK_THROWS_AS(build_topology(TopologyKind::DirectedTree, 3,
                                 uniform_coupling(3, 0.5)),
                  std::invalid_argument);
}
