#pragma once

#include <string>
#include <utility>
#include <vector>

#include "robcons/state_space.hpp"

namespace robcons {

/// Undirected simple graph on nodes 1..n.
class Graph {
 public:
  Graph() = default;

  /// @throws Error(kInvalidArgument) for self loops, repeated edges, or node
  ///   labels outside 1..n.
  Graph(int n, std::vector<std::pair<int, int>> edges, std::string name = "");

  int nodes() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::string& name() const { return name_; }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::string name_;
};

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int n);
Graph complete_graph(int n);

Matrix laplacian(const Graph& g);

/// Breadth-first search from node 1.
bool is_connected(const Graph& g);

/// The n−1 Laplacian eigenvalues after dropping exactly one zero, ascending.
///
/// @throws Error(kNotConnected) if the second-smallest eigenvalue is ≤ 1e-9.
std::vector<double> nonzero_laplacian_eigenvalues(const Graph& g);

/// All labeled connected simple graphs on n nodes.
///
/// @throws Error(kTooLarge) for n > 5.
std::vector<Graph> enumerate_connected_graphs(int n);

/// The graphs usable while a given number of agents is live.
struct GraphSet {
  std::string label;
  int nodes = 0;
  std::vector<Graph> graphs;
};

/// The graph sets of a multi-agent system, one per admissible agent count
/// (for example N, N−P and N+M).
struct TopologyBank {
  std::vector<GraphSet> sets;

  /// The set whose node count equals `agents`, or nullptr.
  const GraphSet* for_agent_count(int agents) const;

  const GraphSet* find(const std::string& label) const;

  /// Σ |set|·(nodes − 1), the size of the eigenvalue pool.
  std::size_t expected_pool_size() const;

  /// @throws Error(kInvalidArgument) if the bank or a set is empty, a graph's
  ///   node count disagrees with its set, or two sets share a node count or
  ///   a label.
  /// @throws Error(kNotConnected) if a graph is disconnected.
  void validate() const;
};

struct EigenvaluePool {
  std::vector<double> lambdas;
  std::size_t xi() const { return lambdas.size(); }
};

/// Concatenated nonzero spectra in bank order.
EigenvaluePool build_eigenvalue_pool(const TopologyBank& bank);

}  // namespace robcons
