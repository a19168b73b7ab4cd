#include "pcosync/topology.hpp"

#include <algorithm>
#include <stdexcept>

namespace pcosync {

namespace {

void check_couplings(int n, const Vec& coupling) {
  if (n < 1) throw std::invalid_argument("topology: n must be >= 1");
  if (coupling.size() != n) {
    throw std::invalid_argument("topology: expected " + std::to_string(n) +
                                " coupling strengths, got " +
                                std::to_string(coupling.size()));
  }
  for (Index i = 0; i < coupling.size(); ++i) {
    if (!(coupling[i] > 0.0 && coupling[i] < 1.0)) {
      throw std::invalid_argument(
          "topology: coupling l_" + std::to_string(i + 1) + " = " +
          std::to_string(coupling[i]) + " outside (0, 1)");
    }
  }
}

}  // namespace

NetworkTopology NetworkTopology::undirected_chain(int n, const Vec& coupling) {
  check_couplings(n, coupling);
  NetworkTopology t;
  t.n_ = n;
  t.kind_ = TopologyKind::UndirectedChain;
  t.coupling_ = coupling;
  t.out_.resize(n);
  for (int i = 1; i < n; ++i) {
    t.out_[i - 1].push_back(i + 1);
    t.out_[i].push_back(i);
  }
  for (auto& nb : t.out_) std::sort(nb.begin(), nb.end());
  return t;
}

NetworkTopology NetworkTopology::directed_chain(int n, const Vec& coupling) {
  check_couplings(n, coupling);
  NetworkTopology t;
  t.n_ = n;
  t.kind_ = TopologyKind::DirectedChain;
  t.coupling_ = coupling;
  t.out_.resize(n);
  t.parent_.assign(n, 0);
  for (int i = 1; i < n; ++i) {
    t.out_[i - 1].push_back(i + 1);
    t.parent_[i] = i;
  }
  return t;
}

NetworkTopology NetworkTopology::directed_tree(const std::vector<int>& parents,
                                               const Vec& coupling) {
  const int n = static_cast<int>(parents.size());
  check_couplings(n, coupling);

  int root = 0;
  for (int i = 1; i <= n; ++i) {
    const int p = parents[i - 1];
    if (p == 0) {
      if (root != 0) {
        throw std::invalid_argument("tree: more than one root");
      }
      root = i;
    } else if (p < 1 || p > n) {
      throw std::invalid_argument("tree: parent of node " + std::to_string(i) +
                                  " out of range");
    } else if (p == i) {
      throw std::invalid_argument("tree: self edge at node " +
                                  std::to_string(i));
    }
  }
  if (root == 0) throw std::invalid_argument("tree: no root (parent 0) found");

  // every node must reach the root through parents; this also rejects cycles
  for (int i = 1; i <= n; ++i) {
    int cur = i, steps = 0;
    while (cur != root) {
      cur = parents[cur - 1];
      if (++steps > n) {
        throw std::invalid_argument("tree: node " + std::to_string(i) +
                                    " is on a cycle or disconnected");
      }
    }
  }

  NetworkTopology t;
  t.n_ = n;
  t.kind_ = TopologyKind::DirectedTree;
  t.coupling_ = coupling;
  t.parent_ = parents;
  t.root_ = root;
  t.out_.resize(n);
  for (int i = 1; i <= n; ++i) {
    if (parents[i - 1] != 0) t.out_[parents[i - 1] - 1].push_back(i);
  }
  for (auto& nb : t.out_) std::sort(nb.begin(), nb.end());
  return t;
}

const std::vector<int>& NetworkTopology::out_neighbors(int i) const {
  if (i < 1 || i > n_) {
    throw std::domain_error("out_neighbors: node id " + std::to_string(i) +
                            " out of range");
  }
  return out_[i - 1];
}

std::vector<std::vector<int>> NetworkTopology::decompose_tree() const {
  // a directed chain is a tree with a single leaf, so it decomposes too
  if (kind_ == TopologyKind::UndirectedChain) {
    throw std::domain_error("decompose_tree: topology is not a directed tree");
  }
  std::vector<std::vector<int>> chains;
  for (int leaf = 1; leaf <= n_; ++leaf) {
    if (!out_[leaf - 1].empty()) continue;
    std::vector<int> chain;
    for (int cur = leaf; cur != 0; cur = parent_[cur - 1]) chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());
    chains.push_back(std::move(chain));
  }
  return chains;  // leaf ids ascend with the loop order
}

NetworkTopology build_topology(TopologyKind kind, int n, const Vec& coupling,
                               const std::optional<std::vector<int>>& parents) {
  switch (kind) {
    case TopologyKind::UndirectedChain:
      return NetworkTopology::undirected_chain(n, coupling);
    case TopologyKind::DirectedChain:
      return NetworkTopology::directed_chain(n, coupling);
    case TopologyKind::DirectedTree: {
      if (!parents) {
        throw std::invalid_argument("tree topology requires a parent list");
      }
      if (static_cast<int>(parents->size()) != n) {
        throw std::invalid_argument("tree parent list length must equal n");
      }
      return NetworkTopology::directed_tree(*parents, coupling);
    }
  }
  throw std::invalid_argument("unknown topology kind");
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::UndirectedChain: return "undirected_chain";
    case TopologyKind::DirectedChain: return "directed_chain";
    case TopologyKind::DirectedTree: return "directed_tree";
  }
  return "?";
}

TopologyKind topology_kind_from_string(const std::string& s) {
  if (s == "undirected_chain") return TopologyKind::UndirectedChain;
  if (s == "directed_chain") return TopologyKind::DirectedChain;
  if (s == "directed_tree") return TopologyKind::DirectedTree;
  throw std::invalid_argument("unknown topology kind: " + s);
}

}  // namespace pcosync
