#include "robcons/graphs.hpp"

#include <gtest/gtest.h>

#include "robcons/case_study.hpp"

namespace robcons {
namespace {

Graph Triangle() { return Graph(3, {{1, 2}, {2, 3}, {1, 3}}, "triangle"); }

TEST(Graph, RejectsInvalidEdges) {
  EXPECT_THROW(Graph(3, {{1, 1}}), Error);
  EXPECT_THROW(Graph(3, {{1, 2}, {2, 1}}), Error);
  EXPECT_THROW(Graph(3, {{0, 2}}), Error);
  EXPECT_THROW(Graph(3, {{1, 4}}), Error);
  EXPECT_THROW(Graph(0, {}), Error);
}

TEST(Laplacian, Examples) {
  Matrix expected(3, 3);
  expected << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  EXPECT_EQ(laplacian(Triangle()), expected);

  Matrix path(2, 2);
  path << 1, -1, -1, 1;
  EXPECT_EQ(laplacian(Graph(2, {{1, 2}})), path);

  EXPECT_EQ(laplacian(Graph(3, {})), Matrix::Zero(3, 3));
}

TEST(Connectivity, Examples) {
  EXPECT_TRUE(is_connected(Triangle()));
  EXPECT_FALSE(is_connected(Graph(3, {{1, 2}})));
  EXPECT_TRUE(is_connected(path_graph(5)));
  EXPECT_TRUE(is_connected(Graph(1, {})));
}

TEST(Spectrum, Examples) {
  auto expect_spectrum = [](const Graph& g, const std::vector<double>& expected) {
    const std::vector<double> ev = nonzero_laplacian_eigenvalues(g);
    ASSERT_EQ(ev.size(), expected.size());
    for (std::size_t i = 0; i < ev.size(); ++i) EXPECT_NEAR(ev[i], expected[i], 1e-12);
  };
  expect_spectrum(Triangle(), {3, 3});
  expect_spectrum(path_graph(3), {1, 3});
  expect_spectrum(complete_graph(4), {4, 4, 4});
  expect_spectrum(star_graph(5), {1, 1, 1, 5});
  expect_spectrum(cycle_graph(4), {2, 2, 4});
}

TEST(Spectrum, DisconnectedIsRejected) {
  try {
    nonzero_laplacian_eigenvalues(Graph(3, {{1, 2}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotConnected);
  }
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_connected_graphs(1).size(), 1u);
  EXPECT_EQ(enumerate_connected_graphs(2).size(), 1u);
  EXPECT_EQ(enumerate_connected_graphs(3).size(), 4u);
  EXPECT_EQ(enumerate_connected_graphs(4).size(), 38u);
  EXPECT_EQ(enumerate_connected_graphs(5).size(), 728u);
  try {
    enumerate_connected_graphs(6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooLarge);
  }
}

TEST(Enumerate, RankMatchesConnectivity) {
  for (int n = 1; n <= 4; ++n) {
    const int pairs = n * (n - 1) / 2;
    for (int mask = 0; mask < (1 << pairs); ++mask) {
      std::vector<std::pair<int, int>> edges;
      int bit = 0;
      for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j, ++bit) {
          if (mask & (1 << bit)) edges.emplace_back(i, j);
        }
      }
      const Graph g(n, edges);
      const Matrix L = laplacian(g);
      EXPECT_EQ(L.rowwise().sum(), Vector::Zero(n));
      Eigen::FullPivLU<Matrix> lu(L);
      EXPECT_EQ(lu.rank() == n - 1, is_connected(g)) << "n=" << n << " mask=" << mask;
      Eigen::SelfAdjointEigenSolver<Matrix> es(L);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
      EXPECT_LE(es.eigenvalues().maxCoeff(), n + 1e-12);
    }
  }
}

TEST(Pool, SingleTriangle) {
  TopologyBank bank;
  bank.sets.push_back(GraphSet{"T", 3, {Triangle()}});
  const EigenvaluePool pool = build_eigenvalue_pool(bank);
  EXPECT_EQ(pool.xi(), 2u);
  EXPECT_NEAR(pool.lambdas[0], 3.0, 1e-12);
  EXPECT_NEAR(pool.lambdas[1], 3.0, 1e-12);
}

TEST(Pool, CanonicalBank) {
  const TopologyBank bank = uuv::canonical_bank();
  ASSERT_EQ(bank.sets.size(), 3u);
  EXPECT_EQ(bank.find("N")->graphs.size(), 3u);
  EXPECT_EQ(bank.find("N-P")->graphs.size(), 4u);
  EXPECT_EQ(bank.find("N+M")->graphs.size(), 3u);
  EXPECT_EQ(bank.expected_pool_size(), 29u);
  const EigenvaluePool pool = build_eigenvalue_pool(bank);
  EXPECT_EQ(pool.xi(), 3u * 3 + 4u * 2 + 3u * 4);
  for (double l : pool.lambdas) {
    EXPECT_GT(l, 0.0);
    EXPECT_LE(l, 5.0 + 1e-12);
  }
  EXPECT_EQ(bank.for_agent_count(4)->label, "N");
  EXPECT_EQ(bank.for_agent_count(2), nullptr);
}

TEST(Pool, DisconnectedBankIsRejected) {
  TopologyBank bank;
  bank.sets.push_back(GraphSet{"bad", 3, {Graph(3, {{1, 2}})}});
  try {
    build_eigenvalue_pool(bank);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotConnected);
  }
}

}  // namespace
}  // namespace robcons
