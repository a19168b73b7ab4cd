#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcosync/types.hpp"

namespace pcosync {

enum class TopologyKind { UndirectedChain, DirectedChain, DirectedTree };

/// Weighted directed interaction graph restricted to the shapes the
/// analysis covers. Node ids are 1-based; coupling[j-1] is the strength
/// l_j applied to node j when it receives a pulse. Immutable once built.
class NetworkTopology {
 public:
  static NetworkTopology undirected_chain(int n, const Vec& coupling);
  static NetworkTopology directed_chain(int n, const Vec& coupling);
  /// parents[i-1] is the parent of node i; the root carries 0.
  static NetworkTopology directed_tree(const std::vector<int>& parents,
                                       const Vec& coupling);

  int n() const { return n_; }
  TopologyKind kind() const { return kind_; }
  double coupling(int node) const { return coupling_[node - 1]; }
  const Vec& couplings() const { return coupling_; }
  int root() const { return root_; }

  /// Nodes receiving node i's pulse, ascending.
  const std::vector<int>& out_neighbors(int i) const;

  /// Root-to-leaf node sequences, one per leaf, sorted by leaf id.
  /// Tree topologies only.
  std::vector<std::vector<int>> decompose_tree() const;

 private:
  NetworkTopology() = default;

  int n_ = 0;
  TopologyKind kind_ = TopologyKind::UndirectedChain;
  Vec coupling_;
  std::vector<std::vector<int>> out_;   // out_[i-1], sorted
  std::vector<int> parent_;             // trees only; 0 at the root
  int root_ = 1;
};

NetworkTopology build_topology(TopologyKind kind, int n, const Vec& coupling,
                               const std::optional<std::vector<int>>& parents =
                                   std::nullopt);

std::string to_string(TopologyKind kind);
TopologyKind topology_kind_from_string(const std::string& s);

}  // namespace pcosync
