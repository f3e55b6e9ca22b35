#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "robcons/graphs.hpp"
#include "robcons/state_space.hpp"
#include "robcons/synthesis.hpp"

namespace robcons {

struct Event {
  enum class Kind { kRemove, kAdd, kSwitchSet };

  double time = 0.0;
  Kind kind = Kind::kRemove;
  /// kRemove: the ids to drop. kAdd: ids for the new agents; when empty the
  /// next unused ids are assigned.
  std::vector<int> agents;
  /// kAdd: one plant initial state per new agent.
  std::vector<Vector> initial_states;
  /// kSwitchSet: label of the graph set to activate.
  std::string set_label;
};

std::string to_string(Event::Kind kind);

struct Scenario {
  std::string label;
  Matrix A;
  Matrix B;
  Matrix dA;
  Matrix dB;
  Controller controller;
  TopologyBank bank;
  /// Plant initial states of agents 1..N; controller states start at zero.
  std::vector<Vector> initial_states;
  std::vector<Event> events;
  double t_end = 800.0;
  double dt = 0.01;
  double switch_period = 1.0;

  /// @throws Error(kInvalidArgument) on inconsistent timing, dimensions, or
  ///   event contents.
  void validate() const;
};

struct Segment {
  std::size_t first_step = 0;
  std::vector<int> agents;
  std::string set_label;
};

struct EventRecord {
  double time = 0.0;
  std::size_t step = 0;
  std::string description;
};

struct SimResult {
  std::string label;
  double dt = 0.0;
  std::vector<double> times;
  /// Plant states at each step: column c belongs to the c-th live agent of
  /// the segment containing the step.
  std::vector<Matrix> states;
  std::vector<double> disagreement;
  /// Index into graph_names of the graph driving the step that follows.
  std::vector<int> active_graph;
  std::vector<std::string> graph_names;
  std::vector<Segment> segments;
  std::vector<EventRecord> event_log;

  std::size_t steps() const { return times.size(); }
  int agent_count(std::size_t step) const {
    return static_cast<int>(states[step].cols());
  }
  const Segment& segment_at(std::size_t step) const;
};

/// [[I⊗Ā + L⊗(B̄K_D), I⊗(B̄K_C)], [L⊗K_B, I⊗K_A]] for `count` agents with
/// plant states stacked before controller states.
Matrix build_closed_loop(int count, const Matrix& L, const Matrix& Abar,
                         const Matrix& Bbar, const Controller& K);

/// Max over agent pairs of the max-abs difference of their state vectors
/// (columns of `states`).
double disagreement(const Matrix& states);

/// Piecewise-LTI propagation with exact per-step transition matrices.
///
/// Events are snapped to the nearest multiple of dt. Live agents, in
/// ascending id order, are the nodes 1..count of the active graph. The
/// active set cycles through its graphs every switch_period starting from
/// the instant it became active.
///
/// @throws Error(kEventGraphMismatch) if no graph set matches the live agent
///   count after an event.
SimResult simulate(const Scenario& s);

void write_trajectories_csv(const SimResult& r, const std::filesystem::path& path);
void write_disagreement_csv(const SimResult& r, const std::filesystem::path& path);
void write_meta_json(const SimResult& r, const std::filesystem::path& path);

}  // namespace robcons
