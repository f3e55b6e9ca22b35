#include "robcons/graphs.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace robcons {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges, std::string name)
    : n_(n), name_(std::move(name)) {
  if (n < 1) {
    throw Error(ErrorKind::kInvalidArgument, "graph needs at least one node");
  }
  std::set<std::pair<int, int>> seen;
  for (auto [i, j] : edges) {
    if (i < 1 || i > n || j < 1 || j > n) {
      throw Error(ErrorKind::kInvalidArgument,
                  "edge (" + std::to_string(i) + "," + std::to_string(j) +
                      ") references a node outside 1.." + std::to_string(n));
    }
    if (i == j) {
      throw Error(ErrorKind::kInvalidArgument,
                  "self loop at node " + std::to_string(i));
    }
    const auto key = std::minmax(i, j);
    if (!seen.insert(key).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "repeated edge (" + std::to_string(key.first) + "," +
                      std::to_string(key.second) + ")");
    }
    edges_.emplace_back(key.first, key.second);
  }
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e, "path" + std::to_string(n));
}

Graph cycle_graph(int n) {
  if (n < 3) {
    throw Error(ErrorKind::kInvalidArgument, "cycle needs at least 3 nodes");
  }
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.emplace_back(i, i + 1);
  e.emplace_back(1, n);
  return Graph(n, e, "cycle" + std::to_string(n));
}

Graph star_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 2; i <= n; ++i) e.emplace_back(1, i);
  return Graph(n, e, "star" + std::to_string(n));
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) e.emplace_back(i, j);
  }
  return Graph(n, e, "complete" + std::to_string(n));
}

Matrix laplacian(const Graph& g) {
  Matrix L = Matrix::Zero(g.nodes(), g.nodes());
  for (auto [i, j] : g.edges()) {
    L(i - 1, j - 1) -= 1.0;
    L(j - 1, i - 1) -= 1.0;
    L(i - 1, i - 1) += 1.0;
    L(j - 1, j - 1) += 1.0;
  }
  return L;
}

bool is_connected(const Graph& g) {
  const int n = g.nodes();
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : g.edges()) {
    adj[i - 1].push_back(j - 1);
    adj[j - 1].push_back(i - 1);
  }
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int reached = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        q.push(v);
      }
    }
  }
  return reached == n;
}

std::vector<double> nonzero_laplacian_eigenvalues(const Graph& g) {
  if (g.nodes() == 1) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian(g), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kEigenFailure, "Laplacian eigenvalues failed");
  }
  const Vector& ev = es.eigenvalues();
  if (ev.size() < 2 || ev(1) <= 1e-9) {
    throw Error(ErrorKind::kNotConnected,
                "graph '" + g.name() + "' on " + std::to_string(g.nodes()) +
                    " nodes is not connected");
  }
  return std::vector<double>(ev.data() + 1, ev.data() + ev.size());
}

std::vector<Graph> enumerate_connected_graphs(int n) {
  if (n > 5) {
    throw Error(ErrorKind::kTooLarge,
                "graph enumeration is limited to 5 nodes, got " +
                    std::to_string(n));
  }
  if (n < 1) {
    throw Error(ErrorKind::kInvalidArgument, "node count must be positive");
  }
  std::vector<std::pair<int, int>> all;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) all.emplace_back(i, j);
  }
  std::vector<Graph> out;
  const unsigned long subsets = 1ul << all.size();
  for (unsigned long mask = 0; mask < subsets; ++mask) {
    std::vector<std::pair<int, int>> e;
    for (std::size_t b = 0; b < all.size(); ++b) {
      if (mask & (1ul << b)) e.push_back(all[b]);
    }
    Graph g(n, std::move(e), "g" + std::to_string(n) + "_" + std::to_string(mask));
    if (is_connected(g)) out.push_back(std::move(g));
  }
  return out;
}

const GraphSet* TopologyBank::for_agent_count(int agents) const {
  for (const GraphSet& s : sets) {
    if (s.nodes == agents) return &s;
  }
  return nullptr;
}

const GraphSet* TopologyBank::find(const std::string& label) const {
  for (const GraphSet& s : sets) {
    if (s.label == label) return &s;
  }
  return nullptr;
}

std::size_t TopologyBank::expected_pool_size() const {
  std::size_t total = 0;
  for (const GraphSet& s : sets) {
    total += s.graphs.size() * static_cast<std::size_t>(std::max(0, s.nodes - 1));
  }
  return total;
}

void TopologyBank::validate() const {
  if (sets.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "topology bank has no graph sets");
  }
  std::set<int> counts;
  std::set<std::string> labels;
  for (const GraphSet& s : sets) {
    if (s.graphs.empty()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "graph set '" + s.label + "' is empty");
    }
    if (!counts.insert(s.nodes).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "two graph sets share the node count " +
                      std::to_string(s.nodes));
    }
    if (!labels.insert(s.label).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "two graph sets share the label '" + s.label + "'");
    }
    for (const Graph& g : s.graphs) {
      if (g.nodes() != s.nodes) {
        throw Error(ErrorKind::kInvalidArgument,
                    "graph '" + g.name() + "' has " + std::to_string(g.nodes()) +
                        " nodes but set '" + s.label + "' expects " +
                        std::to_string(s.nodes));
      }
      if (!is_connected(g)) {
        throw Error(ErrorKind::kNotConnected,
                    "graph '" + g.name() + "' in set '" + s.label +
                        "' is not connected");
      }
    }
  }
}

EigenvaluePool build_eigenvalue_pool(const TopologyBank& bank) {
  bank.validate();
  EigenvaluePool pool;
  for (const GraphSet& s : bank.sets) {
    for (const Graph& g : s.graphs) {
      const auto ev = nonzero_laplacian_eigenvalues(g);
      pool.lambdas.insert(pool.lambdas.end(), ev.begin(), ev.end());
    }
  }
  if (pool.xi() != bank.expected_pool_size()) {
    throw Error(ErrorKind::kNumericalInconsistency,
                "pool size " + std::to_string(pool.xi()) +
                    " disagrees with the expected " +
                    std::to_string(bank.expected_pool_size()));
  }
  return pool;
}

}  // namespace robcons
