#include "robcons/simulator.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "robcons/case_study.hpp"

namespace robcons {
namespace {

Matrix M1(double v) { return Matrix::Constant(1, 1, v); }

Vector V1(double v) { return Vector::Constant(1, v); }

// Scalar agent ẋ = −x + u with a one-state protocol.
Controller ToyController() {
  return Controller{M1(-2.0), M1(0.5), M1(1.0), M1(-1.0)};
}

TopologyBank ToyBank() {
  TopologyBank bank;
  bank.sets.push_back(GraphSet{"one", 1, {Graph(1, {}, "single")}});
  bank.sets.push_back(GraphSet{"two", 2, {path_graph(2)}});
  bank.sets.push_back(GraphSet{"three", 3, {path_graph(3), complete_graph(3)}});
  return bank;
}

Scenario ToyScenario(std::vector<Vector> x0) {
  Scenario s;
  s.label = "toy";
  s.A = M1(-1.0);
  s.B = M1(1.0);
  s.dA = M1(0.0);
  s.dB = M1(0.0);
  s.controller = ToyController();
  s.bank = ToyBank();
  s.initial_states = std::move(x0);
  s.t_end = 20.0;
  s.dt = 0.01;
  return s;
}

const Controller& UuvController() {
  static const Controller K =
      synthesize_controller(
          StateSpace(uuv::A(), 2.0 * uuv::B(), uuv::C(), Matrix::Zero(3, 1)), 1.0)
          .K;
  return K;
}

TEST(ClosedLoop, SingleAgentIsBlockDiagonal) {
  const Controller K = ToyController();
  const Matrix Acl = build_closed_loop(1, M1(0.0), M1(-1.0), M1(1.0), K);
  Matrix expected(2, 2);
  expected << -1.0, 1.0, 0.0, -2.0;
  EXPECT_EQ(Acl, expected);
}

TEST(ClosedLoop, MatchesEntrywiseKroneckerExpansion) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 3;
    const int m = 1 + trial % 2;
    const int nk = 1 + trial % 2;
    const Matrix Abar = oracle::random_matrix(n, n, rng);
    const Matrix Bbar = oracle::random_matrix(n, m, rng);
    const Controller K{oracle::random_matrix(nk, nk, rng), oracle::random_matrix(nk, n, rng),
                       oracle::random_matrix(m, nk, rng), oracle::random_matrix(m, n, rng)};
    const Matrix L = laplacian(path_graph(2));
    EXPECT_LT((build_closed_loop(2, L, Abar, Bbar, K) -
               oracle::kron_closed_loop(L, Abar, Bbar, K))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
  }
}

TEST(ClosedLoop, DimensionMismatch) {
  EXPECT_THROW(build_closed_loop(3, laplacian(path_graph(2)), M1(-1), M1(1),
                                 ToyController()),
               Error);
}

TEST(ClosedLoop, UuvConsensusModesAreStable) {
  // Only the consensus direction (λ = 0) keeps the open-loop integrator.
  const TopologyBank bank = uuv::canonical_bank();
  for (const Graph& g : bank.find("N")->graphs) {
    const Matrix Acl = build_closed_loop(4, laplacian(g), uuv::A(), uuv::B(),
                                         uuv::reference_controller());
    Eigen::EigenSolver<Matrix> es(Acl, false);
    int nonnegative = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i).real() > -1e-9) ++nonnegative;
    }
    EXPECT_LE(nonnegative, 3) << g.name();
  }
}

TEST(Disagreement, Examples) {
  EXPECT_EQ(disagreement(Matrix::Ones(3, 4)), 0.0);
  Matrix two(3, 2);
  two << 1, 0, 0, 0, 0, 0;
  EXPECT_EQ(disagreement(two), 1.0);
  Matrix three(1, 3);
  three << 1, 2, 4;
  EXPECT_EQ(disagreement(three), 3.0);
  EXPECT_EQ(disagreement(Matrix::Constant(3, 1, 5.0)), 0.0);
}

TEST(Simulate, SingleAgentDecays) {
  const SimResult r = simulate(ToyScenario({V1(1.0)}));
  ASSERT_EQ(r.steps(), 2001u);
  for (double d : r.disagreement) EXPECT_EQ(d, 0.0);
  EXPECT_NEAR(r.states.back()(0, 0), std::exp(-20.0), 1e-10);
}

TEST(Simulate, IdenticalAgentsStayInConsensus) {
  const SimResult r = simulate(ToyScenario({V1(0.7), V1(0.7)}));
  for (double d : r.disagreement) EXPECT_LE(d, 1e-12);

  Scenario s;
  s.A = uuv::A();
  s.B = uuv::B();
  s.dA = Matrix::Zero(3, 3);
  s.dB = Matrix::Zero(3, 1);
  s.controller = UuvController();
  s.bank = uuv::canonical_bank();
  s.initial_states.assign(4, Vector::Constant(3, 0.3));
  s.t_end = 50.0;
  const SimResult uuv_run = simulate(s);
  for (double d : uuv_run.disagreement) EXPECT_LE(d, 1e-12);
}

TEST(Simulate, MatchesSegmentwiseExponential) {
  Scenario s = ToyScenario({V1(1.0), V1(-1.0)});
  s.t_end = 0.5;
  const SimResult r = simulate(s);
  const Matrix Acl = build_closed_loop(2, laplacian(path_graph(2)), M1(-1.0), M1(1.0),
                                       ToyController());
  Vector z0(4);
  z0 << 1.0, -1.0, 0.0, 0.0;
  const Vector z = matrix_exponential(Acl, 0.5) * z0;
  EXPECT_NEAR(r.states.back()(0, 0), z(0), 1e-12);
  EXPECT_NEAR(r.states.back()(0, 1), z(1), 1e-12);
}

TEST(Simulate, EventsChangeAgentCount) {
  Scenario s = ToyScenario({V1(1.0), V1(2.0)});
  Event add;
  add.time = 5.0;
  add.kind = Event::Kind::kAdd;
  add.initial_states = {V1(3.0)};
  Event remove;
  remove.time = 10.0;
  remove.kind = Event::Kind::kRemove;
  remove.agents = {1, 3};
  s.events = {add, remove};
  const SimResult r = simulate(s);
  EXPECT_EQ(r.agent_count(499), 2);
  EXPECT_EQ(r.agent_count(500), 3);
  EXPECT_EQ(r.agent_count(999), 3);
  EXPECT_EQ(r.agent_count(1000), 1);
  ASSERT_EQ(r.segments.size(), 3u);
  EXPECT_EQ(r.segments[1].agents, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(r.segments[2].agents, (std::vector<int>{2}));
  EXPECT_EQ(r.segments[1].set_label, "three");
  EXPECT_EQ(r.event_log.size(), 2u);
}

TEST(Simulate, TopologyCyclesThroughSet) {
  Scenario s = ToyScenario({V1(1.0), V1(2.0), V1(3.0)});
  s.t_end = 3.0;
  const SimResult r = simulate(s);
  EXPECT_EQ(r.active_graph[0], r.active_graph[99]);
  EXPECT_NE(r.active_graph[99], r.active_graph[100]);
  EXPECT_EQ(r.active_graph[0], r.active_graph[200]);
}

TEST(Simulate, EventGraphMismatch) {
  Scenario s = ToyScenario({V1(1.0), V1(2.0), V1(3.0)});
  Event add;
  add.time = 1.0;
  add.kind = Event::Kind::kAdd;
  add.initial_states = {V1(0.0)};
  s.events = {add};
  try {
    simulate(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEventGraphMismatch);
  }
}

TEST(Simulate, RejectsInvalidScenarios) {
  Scenario s = ToyScenario({V1(1.0)});
  s.dt = 0.0;
  EXPECT_THROW(simulate(s), Error);
  s = ToyScenario({V1(1.0)});
  Event remove;
  remove.time = 30.0;
  remove.kind = Event::Kind::kRemove;
  remove.agents = {1};
  s.events = {remove};
  EXPECT_THROW(simulate(s), Error);
  s.events[0].time = 1.0;
  s.events[0].agents = {7};
  EXPECT_THROW(simulate(s), Error);
}

TEST(Simulate, IsDeterministic) {
  const Config config = uuv::default_config();
  Scenario s = build_scenarios(config, 1, UuvController()).front();
  const SimResult a = simulate(s);
  const SimResult b = simulate(s);
  ASSERT_EQ(a.steps(), b.steps());
  for (std::size_t k = 0; k < a.steps(); ++k) {
    ASSERT_EQ(a.states[k], b.states[k]);
  }
}

TEST(Simulate, HalvingStepIsConsistent) {
  const Config config = uuv::default_config();
  Scenario s = build_scenarios(config, 1, UuvController()).front();
  const SimResult coarse = simulate(s);
  s.dt = 0.005;
  const SimResult fine = simulate(s);
  const Matrix& a = coarse.states.back();
  const Matrix& b = fine.states.back();
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LT((a - b).norm(), 1e-6 * std::max(1.0, b.norm()));
}

TEST(CaseStudy, AgentCountTraces) {
  const std::vector<SimResult> case1 = run_case_study(1, {0.3}, UuvController());
  const std::vector<SimResult> case2 = run_case_study(2, {0.3}, UuvController());
  ASSERT_EQ(case1.size(), 1u);
  ASSERT_EQ(case2.size(), 1u);
  auto count_at = [](const SimResult& r, double t) {
    return r.agent_count(static_cast<std::size_t>(std::llround(t / r.dt)));
  };
  for (double t : {0.0, 199.99}) EXPECT_EQ(count_at(case1[0], t), 4);
  for (double t : {200.0, 499.99}) EXPECT_EQ(count_at(case1[0], t), 5);
  for (double t : {500.0, 800.0}) EXPECT_EQ(count_at(case1[0], t), 3);
  for (double t : {0.0, 199.99}) EXPECT_EQ(count_at(case2[0], t), 4);
  for (double t : {200.0, 499.99}) EXPECT_EQ(count_at(case2[0], t), 3);
  for (double t : {500.0, 800.0}) EXPECT_EQ(count_at(case2[0], t), 5);
}

TEST(CaseStudy, DisagreementDecaysBetweenEvents) {
  for (int c : {1, 2}) {
    const SimResult r = run_case_study(c, {0.3}, UuvController()).front();
    for (std::size_t i = 0; i < r.segments.size(); ++i) {
      const std::size_t start = r.segments[i].first_step;
      const std::size_t end =
          i + 1 < r.segments.size() ? r.segments[i + 1].first_step : r.steps();
      ASSERT_GE(end - start, 10000u);
      EXPECT_LT(r.disagreement[end - 101], r.disagreement[start]) << "case " << c;
    }
    EXPECT_LT(r.disagreement.back(), 1e-2);
  }
}

TEST(Output, CsvRowCounts) {
  Scenario s = ToyScenario({V1(1.0), V1(2.0)});
  s.t_end = 1.0;
  Event add;
  add.time = 0.5;
  add.kind = Event::Kind::kAdd;
  add.initial_states = {V1(0.0)};
  s.events = {add};
  const SimResult r = simulate(s);
  const auto dir = std::filesystem::temp_directory_path() / "robcons_sim_test";
  std::filesystem::create_directories(dir);
  write_trajectories_csv(r, dir / "traj.csv");
  write_disagreement_csv(r, dir / "d.csv");
  write_meta_json(r, dir / "meta.json");
  auto lines = [](const std::filesystem::path& p) {
    std::ifstream is(p);
    std::string line;
    std::size_t count = 0;
    while (std::getline(is, line)) ++count;
    return count;
  };
  // 50 steps with two agents, then 51 with three; one header line each.
  EXPECT_EQ(lines(dir / "traj.csv"), 1u + 50u * 2 + 51u * 3);
  EXPECT_EQ(lines(dir / "d.csv"), 1u + 101u);
  EXPECT_TRUE(std::filesystem::exists(dir / "meta.json"));
}

}  // namespace
}  // namespace robcons
