#include "robcons/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "robcons/numerics.hpp"

namespace robcons {
namespace {

struct Agent {
  int id;
  Vector x;
  Vector v;
};

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ids[i]);
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot open " + path.string() + " for writing");
  }
  return os;
}

void append_double(std::string* out, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out->append(buf, res.ptr);
}

void append_time(std::string* out, double t) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.10g", t);
  out->append(buf, static_cast<std::size_t>(len));
}

}  // namespace

std::string to_string(Event::Kind kind) {
  switch (kind) {
    case Event::Kind::kRemove: return "remove";
    case Event::Kind::kAdd: return "add";
    case Event::Kind::kSwitchSet: return "switch_set";
  }
  return "unknown";
}

void Scenario::validate() const {
  if (!(dt > 0.0) || !(t_end > 0.0) || !(switch_period > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "dt, t_end and switch_period must be positive");
  }
  if (std::llround(switch_period / dt) < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "switch_period must be at least one step");
  }
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "agent A and B are inconsistent");
  }
  const Eigen::Index m = B.cols();
  if (dA.rows() != n || dA.cols() != n || dB.rows() != n || dB.cols() != m) {
    throw Error(ErrorKind::kDimensionMismatch,
                "perturbation matrices do not match the agent dimensions");
  }
  const Controller& K = controller;
  const Eigen::Index nk = K.K_A.rows();
  if (K.K_A.cols() != nk || K.K_B.rows() != nk || K.K_B.cols() != n ||
      K.K_C.rows() != m || K.K_C.cols() != nk || K.K_D.rows() != m ||
      K.K_D.cols() != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "controller dimensions do not match the agent");
  }
  if (initial_states.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "scenario has no agents");
  }
  for (const Vector& x0 : initial_states) {
    if (x0.size() != n) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "initial state has the wrong dimension");
    }
  }
  bank.validate();
  double last = -1.0;
  for (const Event& e : events) {
    if (!(e.time > last)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "event times must be strictly increasing");
    }
    if (e.time < 0.0 || e.time >= t_end) {
      throw Error(ErrorKind::kInvalidArgument,
                  "event time " + std::to_string(e.time) +
                      " lies outside [0, t_end)");
    }
    last = e.time;
    switch (e.kind) {
      case Event::Kind::kRemove:
        if (e.agents.empty()) {
          throw Error(ErrorKind::kInvalidArgument,
                      "remove event lists no agents");
        }
        break;
      case Event::Kind::kAdd:
        if (e.initial_states.empty()) {
          throw Error(ErrorKind::kInvalidArgument,
                      "add event carries no initial states");
        }
        if (!e.agents.empty() && e.agents.size() != e.initial_states.size()) {
          throw Error(ErrorKind::kInvalidArgument,
                      "add event needs one initial state per agent");
        }
        for (const Vector& x0 : e.initial_states) {
          if (x0.size() != n) {
            throw Error(ErrorKind::kDimensionMismatch,
                        "added agent initial state has the wrong dimension");
          }
        }
        break;
      case Event::Kind::kSwitchSet:
        if (e.set_label.empty()) {
          throw Error(ErrorKind::kInvalidArgument,
                      "switch_set event names no graph set");
        }
        break;
    }
  }
}

const Segment& SimResult::segment_at(std::size_t step) const {
  auto it = std::upper_bound(
      segments.begin(), segments.end(), step,
      [](std::size_t s, const Segment& seg) { return s < seg.first_step; });
  return *std::prev(it);
}

Matrix build_closed_loop(int count, const Matrix& L, const Matrix& Abar,
                         const Matrix& Bbar, const Controller& K) {
  if (L.rows() != count || L.cols() != count) {
    throw Error(ErrorKind::kDimensionMismatch,
                "Laplacian is " + std::to_string(L.rows()) + "x" +
                    std::to_string(L.cols()) + " for " + std::to_string(count) +
                    " agents");
  }
  const Eigen::Index n = Abar.rows();
  const Eigen::Index nk = K.K_A.rows();
  if (Abar.cols() != n || Bbar.rows() != n || K.K_D.cols() != n ||
      K.K_B.cols() != n || K.K_C.rows() != Bbar.cols() ||
      K.K_D.rows() != Bbar.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "closed loop: agent and controller dimensions differ");
  }
  const Matrix I = Matrix::Identity(count, count);
  const Eigen::Index np = count * n;
  const Eigen::Index nc = count * nk;
  Matrix Acl(np + nc, np + nc);
  Acl.topLeftCorner(np, np) = Eigen::kroneckerProduct(I, Abar).eval() +
                              Eigen::kroneckerProduct(L, Bbar * K.K_D).eval();
  Acl.topRightCorner(np, nc) = Eigen::kroneckerProduct(I, Bbar * K.K_C).eval();
  Acl.bottomLeftCorner(nc, np) = Eigen::kroneckerProduct(L, K.K_B).eval();
  Acl.bottomRightCorner(nc, nc) = Eigen::kroneckerProduct(I, K.K_A).eval();
  return Acl;
}

double disagreement(const Matrix& states) {
  if (states.cols() <= 1) return 0.0;
  return (states.rowwise().maxCoeff() - states.rowwise().minCoeff()).maxCoeff();
}

SimResult simulate(const Scenario& s) {
  s.validate();
  const Eigen::Index n = s.A.rows();
  const Eigen::Index nk = s.controller.K_A.rows();
  const Matrix Abar = s.A + s.dA;
  const Matrix Bbar = s.B + s.dB;
  const long total_steps = std::llround(s.t_end / s.dt);
  const long period_steps = std::llround(s.switch_period / s.dt);

  std::vector<Agent> live;
  for (std::size_t i = 0; i < s.initial_states.size(); ++i) {
    live.push_back({static_cast<int>(i) + 1, s.initial_states[i],
                    Vector::Zero(nk)});
  }
  int max_id = static_cast<int>(live.size());

  SimResult r;
  r.label = s.label;
  r.dt = s.dt;
  std::vector<std::size_t> graph_offset;
  for (const GraphSet& set : s.bank.sets) {
    graph_offset.push_back(r.graph_names.size());
    for (const Graph& g : set.graphs) r.graph_names.push_back(set.label + "/" + g.name());
  }

  auto set_index_for = [&](int count) -> std::size_t {
    for (std::size_t i = 0; i < s.bank.sets.size(); ++i) {
      if (s.bank.sets[i].nodes == count) return i;
    }
    throw Error(ErrorKind::kEventGraphMismatch,
                "no graph set has " + std::to_string(count) + " nodes");
  };

  std::size_t active = set_index_for(static_cast<int>(live.size()));
  long activated_at = 0;
  auto live_ids = [&] {
    std::vector<int> ids;
    for (const Agent& a : live) ids.push_back(a.id);
    return ids;
  };
  r.segments.push_back({0, live_ids(), s.bank.sets[active].label});

  std::vector<long> event_steps;
  for (const Event& e : s.events) event_steps.push_back(std::llround(e.time / s.dt));
  std::size_t next_event = 0;

  std::map<std::pair<std::size_t, std::size_t>, Matrix> transitions;
  auto transition = [&](std::size_t set, std::size_t graph) -> const Matrix& {
    auto key = std::make_pair(set, graph);
    auto it = transitions.find(key);
    if (it == transitions.end()) {
      const GraphSet& gs = s.bank.sets[set];
      const Matrix Acl = build_closed_loop(gs.nodes, laplacian(gs.graphs[graph]),
                                           Abar, Bbar, s.controller);
      it = transitions.emplace(key, matrix_exponential(Acl, s.dt)).first;
    }
    return it->second;
  };

  r.times.reserve(static_cast<std::size_t>(total_steps) + 1);
  r.states.reserve(static_cast<std::size_t>(total_steps) + 1);
  Vector z;
  for (long k = 0; k <= total_steps; ++k) {
    bool changed = false;
    while (next_event < s.events.size() && event_steps[next_event] == k) {
      const Event& e = s.events[next_event++];
      std::string what = to_string(e.kind);
      if (e.kind == Event::Kind::kRemove) {
        for (int id : e.agents) {
          auto it = std::find_if(live.begin(), live.end(),
                                 [id](const Agent& a) { return a.id == id; });
          if (it == live.end()) {
            throw Error(ErrorKind::kInvalidArgument,
                        "remove event references agent " + std::to_string(id) +
                            " which is not live");
          }
          live.erase(it);
        }
        if (live.empty()) {
          throw Error(ErrorKind::kInvalidArgument, "all agents were removed");
        }
        what += " agents " + join_ids(e.agents);
        active = set_index_for(static_cast<int>(live.size()));
        activated_at = k;
      } else if (e.kind == Event::Kind::kAdd) {
        std::vector<int> added;
        for (std::size_t i = 0; i < e.initial_states.size(); ++i) {
          const int id = e.agents.empty() ? max_id + 1 : e.agents[i];
          if (std::any_of(live.begin(), live.end(),
                          [id](const Agent& a) { return a.id == id; })) {
            throw Error(ErrorKind::kInvalidArgument,
                        "add event reuses live agent id " + std::to_string(id));
          }
          live.push_back({id, e.initial_states[i], Vector::Zero(nk)});
          max_id = std::max(max_id, id);
          added.push_back(id);
        }
        std::sort(live.begin(), live.end(),
                  [](const Agent& a, const Agent& b) { return a.id < b.id; });
        what += " agents " + join_ids(added);
        active = set_index_for(static_cast<int>(live.size()));
        activated_at = k;
      } else {
        const GraphSet* gs = s.bank.find(e.set_label);
        if (gs == nullptr || gs->nodes != static_cast<int>(live.size())) {
          throw Error(ErrorKind::kEventGraphMismatch,
                      "graph set '" + e.set_label + "' does not match " +
                          std::to_string(live.size()) + " live agents");
        }
        active = static_cast<std::size_t>(gs - s.bank.sets.data());
        activated_at = k;
        what += " to " + e.set_label;
      }
      r.event_log.push_back({static_cast<double>(k) * s.dt,
                             static_cast<std::size_t>(k), what});
      changed = true;
    }
    if (changed) {
      r.segments.push_back(
          {static_cast<std::size_t>(k), live_ids(), s.bank.sets[active].label});
    }

    const Eigen::Index count = static_cast<Eigen::Index>(live.size());
    if (changed || k == 0) {
      z.resize(count * (n + nk));
      for (Eigen::Index i = 0; i < count; ++i) {
        z.segment(i * n, n) = live[i].x;
        z.segment(count * n + i * nk, nk) = live[i].v;
      }
    }
    Matrix x(n, count);
    for (Eigen::Index i = 0; i < count; ++i) x.col(i) = z.segment(i * n, n);
    r.times.push_back(static_cast<double>(k) * s.dt);
    r.disagreement.push_back(disagreement(x));
    r.states.push_back(std::move(x));

    const GraphSet& set = s.bank.sets[active];
    const std::size_t graph = static_cast<std::size_t>(
        ((k - activated_at) / period_steps) %
        static_cast<long>(set.graphs.size()));
    r.active_graph.push_back(static_cast<int>(graph_offset[active] + graph));
    if (k == total_steps) break;

    z = transition(active, graph) * z;
    // Keep per-agent copies current so events can splice the state vector.
    if (next_event < s.events.size() && event_steps[next_event] == k + 1) {
      for (Eigen::Index i = 0; i < count; ++i) {
        live[i].x = z.segment(i * n, n);
        live[i].v = z.segment(count * n + i * nk, nk);
      }
    }
  }
  return r;
}

void write_trajectories_csv(const SimResult& r, const std::filesystem::path& path) {
  std::ofstream os = open_output(path);
  std::string buf = "t,agent_id,state_index,value\n";
  for (std::size_t k = 0; k < r.steps(); ++k) {
    const Segment& seg = r.segment_at(k);
    const Matrix& x = r.states[k];
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        append_time(&buf, r.times[k]);
        buf += ',';
        buf += std::to_string(seg.agents[static_cast<std::size_t>(c)]);
        buf += ',';
        buf += std::to_string(i + 1);
        buf += ',';
        append_double(&buf, x(i, c));
        buf += '\n';
      }
    }
    if (buf.size() > (1u << 20)) {
      os << buf;
      buf.clear();
    }
  }
  os << buf;
}

void write_disagreement_csv(const SimResult& r, const std::filesystem::path& path) {
  std::ofstream os = open_output(path);
  std::string buf = "t,d\n";
  for (std::size_t k = 0; k < r.steps(); ++k) {
    append_time(&buf, r.times[k]);
    buf += ',';
    append_double(&buf, r.disagreement[k]);
    buf += '\n';
  }
  os << buf;
}

void write_meta_json(const SimResult& r, const std::filesystem::path& path) {
  using nlohmann::json;
  json meta;
  meta["label"] = r.label;
  meta["dt"] = r.dt;
  meta["steps"] = r.steps();
  meta["t_end"] = r.times.empty() ? 0.0 : r.times.back();
  meta["final_disagreement"] = r.disagreement.empty() ? 0.0 : r.disagreement.back();
  json events = json::array();
  for (const auto& e : r.event_log) {
    events.push_back({{"t", e.time}, {"step", e.step}, {"event", e.description}});
  }
  meta["events"] = events;
  json segments = json::array();
  for (const auto& s : r.segments) {
    segments.push_back({{"t", static_cast<double>(s.first_step) * r.dt},
                        {"step", s.first_step},
                        {"agents", s.agents},
                        {"graph_set", s.set_label}});
  }
  meta["segments"] = segments;
  meta["graph_ids"] = r.graph_names;
  json graphs = json::array();
  for (std::size_t k = 0; k < r.active_graph.size(); ++k) {
    if (k == 0 || r.active_graph[k] != r.active_graph[k - 1]) {
      graphs.push_back({{"t", r.times[k]}, {"graph", r.active_graph[k]}});
    }
  }
  meta["active_graph"] = graphs;
  std::ofstream os = open_output(path);
  os << meta.dump(2) << '\n';
}

}  // namespace robcons
