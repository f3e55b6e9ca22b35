#include "robcons/case_study.hpp"

#include <cstdio>

#include "parallel.hpp"

namespace robcons::uuv {
namespace {

std::string velocity_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "v%.4f", v);
  return buf;
}

Vector agent_state(int i) { return Vector::Constant(3, 0.1 * i); }

}  // namespace

Matrix A(double v) {
  Matrix a(3, 3);
  a << -0.7, -0.3, 0.0,
       1.0, 0.0, 0.0,
       0.0, -v, 0.0;
  return a;
}

Matrix B() {
  Matrix b(3, 1);
  b << 0.035, 0.0, 0.0;
  return b;
}

Matrix C() { return Matrix::Identity(3, 3); }

std::vector<double> case_velocities() {
  return {0.3750, 0.3450, 0.3150, 0.2850, 0.2550, 0.2250};
}

Matrix delta_A(double v) { return A(v) - A(kNominalSurge); }

TopologyBank canonical_bank() {
  TopologyBank bank;
  bank.sets.push_back({"N", 4, {star_graph(4), cycle_graph(4), complete_graph(4)}});
  GraphSet three{"N-P", 3, {}};
  for (Graph& g : enumerate_connected_graphs(3)) {
    std::string name = "conn3";
    for (auto [i, j] : g.edges()) name += "_" + std::to_string(i) + std::to_string(j);
    three.graphs.emplace_back(3, g.edges(), name);
  }
  bank.sets.push_back(std::move(three));
  bank.sets.push_back({"N+M", 5, {star_graph(5), cycle_graph(5), complete_graph(5)}});
  return bank;
}

PerturbationBox perturbation_box(int grid_count) {
  PerturbationBox box = PerturbationBox::Zero(3, 1);
  box.dA_lower(2, 1) = -kSurgeUncertainty;
  box.dA_upper(2, 1) = kSurgeUncertainty;
  box.grid_count = grid_count;
  return box;
}

Controller reference_controller() {
  Controller K;
  K.K_A.resize(2, 2);
  K.K_A << -0.3227, -0.3283,
           0.658, -0.5469;
  K.K_B.resize(2, 3);
  K.K_B << 0.01976, -0.05098, 0.4598,
           -0.01496, 0.1107, -0.4072;
  K.K_C.resize(1, 2);
  K.K_C << -0.2959, 0.09703;
  K.K_D.resize(1, 3);
  K.K_D << -0.003565, -0.2504, 1.13;
  return K;
}

Config default_config() {
  Config c;
  c.A = A();
  c.B = B();
  c.C = C();
  c.box = perturbation_box();
  c.bank = canonical_bank();

  std::vector<Vector> four;
  for (int i = 1; i <= 4; ++i) four.push_back(agent_state(i));

  Event add5{200.0, Event::Kind::kAdd, {5}, {agent_state(5)}, ""};
  Event remove45{500.0, Event::Kind::kRemove, {4, 5}, {}, ""};
  Event remove4{200.0, Event::Kind::kRemove, {4}, {}, ""};
  Event add45{500.0, Event::Kind::kAdd, {4, 5}, {agent_state(4), agent_state(5)}, ""};

  const Matrix zero_b = Matrix::Zero(3, 1);
  const std::vector<CaseRun> nominal = {
      {velocity_label(kNominalSurge), delta_A(kNominalSurge), zero_b}};
  std::vector<CaseRun> sweep;
  for (double v : case_velocities()) sweep.push_back({velocity_label(v), delta_A(v), zero_b});

  c.cases.push_back({1, "4 agents, one added at 200 s, two removed at 500 s",
                     four, {add5, remove45}, nominal});
  c.cases.push_back({2, "4 agents, one removed at 200 s, two added at 500 s",
                     four, {remove4, add45}, nominal});
  c.cases.push_back({3, "case 1 events over the surge velocity sweep", four,
                     {add5, remove45}, sweep});
  c.cases.push_back({4, "case 2 events over the surge velocity sweep", four,
                     {remove4, add45}, sweep});
  return c;
}

}  // namespace robcons::uuv

namespace robcons {

std::vector<Scenario> build_scenarios(const Config& config, int case_id,
                                      const Controller& K) {
  const CaseSpec& cs = config.find_case(case_id);
  std::vector<Scenario> out;
  for (const CaseRun& run : cs.runs) {
    Scenario s;
    s.label = run.label;
    s.A = config.A;
    s.B = config.B;
    s.dA = run.dA;
    s.dB = run.dB;
    s.controller = K;
    s.bank = config.bank;
    s.initial_states = cs.initial_states;
    s.events = cs.events;
    s.t_end = config.t_end;
    s.dt = config.dt;
    s.switch_period = config.switch_period;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SimResult> run_case_study(const Config& config, int case_id,
                                      const Controller& K) {
  const std::vector<Scenario> scenarios = build_scenarios(config, case_id, K);
  std::vector<SimResult> results(scenarios.size());
  internal::parallel_for(scenarios.size(), 0, [&](std::size_t i) {
    results[i] = simulate(scenarios[i]);
  });
  return results;
}

std::vector<SimResult> run_case_study(int case_id,
                                      const std::vector<double>& v_values,
                                      const Controller& K) {
  Config config = uuv::default_config();
  for (CaseSpec& cs : config.cases) {
    if (cs.id != case_id) continue;
    cs.runs.clear();
    for (double v : v_values) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "v%.4f", v);
      cs.runs.push_back({buf, uuv::delta_A(v), Matrix::Zero(3, 1)});
    }
  }
  return run_case_study(config, case_id, K);
}

}  // namespace robcons
