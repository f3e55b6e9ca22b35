#include "robcons/config.hpp"

#include <fstream>
#include <set>

namespace robcons {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::kConfig, "at " + (where.empty() ? "/" : where) + ": " + what);
}

std::string child(const std::string& where, const std::string& key) {
  return where + "/" + key;
}

std::string child(const std::string& where, std::size_t index) {
  return where + "/" + std::to_string(index);
}

const json& object_at(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  return j;
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) fail(child(where, it.key()), "unknown key");
  }
}

const json& member(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(child(where, key), "required value is missing");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& where) {
  const double v = number(j, where);
  if (!(v > 0.0)) fail(where, "expected a positive number");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::string string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

Matrix matrix(const json& j, const std::string& where, Eigen::Index rows = -1,
              Eigen::Index cols = -1) {
  array(j, where);
  if (j.empty()) fail(where, "matrix has no rows");
  const Eigen::Index r = static_cast<Eigen::Index>(j.size());
  const json& first = array(j[0], child(where, 0));
  const Eigen::Index c = static_cast<Eigen::Index>(first.size());
  if (rows >= 0 && r != rows) {
    fail(where, "expected " + std::to_string(rows) + " rows, got " + std::to_string(r));
  }
  if (cols >= 0 && c != cols) {
    fail(where, "expected " + std::to_string(cols) + " columns, got " + std::to_string(c));
  }
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const std::string row_where = child(where, static_cast<std::size_t>(i));
    const json& row = array(j[static_cast<std::size_t>(i)], row_where);
    if (static_cast<Eigen::Index>(row.size()) != c) {
      fail(row_where, "rows have different lengths");
    }
    for (Eigen::Index k = 0; k < c; ++k) {
      M(i, k) = number(row[static_cast<std::size_t>(k)],
                       child(row_where, static_cast<std::size_t>(k)));
    }
  }
  return M;
}

Vector vector(const json& j, const std::string& where, Eigen::Index size) {
  array(j, where);
  if (static_cast<Eigen::Index>(j.size()) != size) {
    fail(where, "expected " + std::to_string(size) + " entries");
  }
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    v(i) = number(j[static_cast<std::size_t>(i)],
                  child(where, static_cast<std::size_t>(i)));
  }
  return v;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::vector<Vector> states(const json& j, const std::string& where,
                           Eigen::Index n) {
  array(j, where);
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(vector(j[i], child(where, i), n));
  }
  return out;
}

std::vector<int> ids(const json& j, const std::string& where) {
  array(j, where);
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(integer(j[i], child(where, i)));
  }
  return out;
}

void parse_agent(const json& j, const std::string& where, Config* c) {
  object_at(j, where);
  reject_unknown(j, where, {"A", "B", "C", "perturbation"});
  c->A = matrix(member(j, "A", where), child(where, "A"));
  const Eigen::Index n = c->A.rows();
  if (c->A.cols() != n) fail(child(where, "A"), "A must be square");
  c->B = matrix(member(j, "B", where), child(where, "B"), n);
  c->C = matrix(member(j, "C", where), child(where, "C"), -1, n);
  const Eigen::Index m = c->B.cols();
  c->box = PerturbationBox::Zero(n, m);
  if (auto it = j.find("perturbation"); it != j.end()) {
    const std::string pw = child(where, "perturbation");
    object_at(*it, pw);
    reject_unknown(*it, pw,
                   {"dA_lower", "dA_upper", "dB_lower", "dB_upper", "grid_count"});
    if (it->contains("dA_lower")) c->box.dA_lower = matrix((*it)["dA_lower"], child(pw, "dA_lower"), n, n);
    if (it->contains("dA_upper")) c->box.dA_upper = matrix((*it)["dA_upper"], child(pw, "dA_upper"), n, n);
    if (it->contains("dB_lower")) c->box.dB_lower = matrix((*it)["dB_lower"], child(pw, "dB_lower"), n, m);
    if (it->contains("dB_upper")) c->box.dB_upper = matrix((*it)["dB_upper"], child(pw, "dB_upper"), n, m);
    if (it->contains("grid_count")) {
      c->box.grid_count = integer((*it)["grid_count"], child(pw, "grid_count"));
    }
    try {
      c->box.validate(n, m);
    } catch (const Error& e) {
      fail(pw, e.what());
    }
  }
}

void parse_topology(const json& j, const std::string& where, Config* c) {
  object_at(j, where);
  reject_unknown(j, where, {"sets"});
  const std::string sw = child(where, "sets");
  const json& sets = array(member(j, "sets", where), sw);
  if (sets.empty()) fail(sw, "topology bank has no graph sets");
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const std::string w = child(sw, s);
    object_at(sets[s], w);
    reject_unknown(sets[s], w, {"label", "nodes", "graphs"});
    GraphSet set;
    set.label = string(member(sets[s], "label", w), child(w, "label"));
    set.nodes = integer(member(sets[s], "nodes", w), child(w, "nodes"));
    if (set.nodes < 1) fail(child(w, "nodes"), "node count must be positive");
    const std::string gw = child(w, "graphs");
    const json& graphs = array(member(sets[s], "graphs", w), gw);
    if (graphs.empty()) fail(gw, "graph set is empty");
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      const std::string w2 = child(gw, g);
      object_at(graphs[g], w2);
      reject_unknown(graphs[g], w2, {"name", "edges"});
      const std::string name =
          graphs[g].contains("name") ? string(graphs[g]["name"], child(w2, "name"))
                                     : set.label + "_" + std::to_string(g + 1);
      const std::string ew = child(w2, "edges");
      const json& edges = array(member(graphs[g], "edges", w2), ew);
      std::vector<std::pair<int, int>> list;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string w3 = child(ew, e);
        if (!edges[e].is_array() || edges[e].size() != 2) {
          fail(w3, "edge must be a pair of node labels");
        }
        list.emplace_back(integer(edges[e][0], child(w3, 0)),
                          integer(edges[e][1], child(w3, 1)));
      }
      try {
        set.graphs.emplace_back(set.nodes, std::move(list), name);
      } catch (const Error& err) {
        fail(w2, err.what());
      }
    }
    c->bank.sets.push_back(std::move(set));
  }
  std::set<int> counts;
  std::set<std::string> labels;
  for (std::size_t s = 0; s < c->bank.sets.size(); ++s) {
    if (!counts.insert(c->bank.sets[s].nodes).second) {
      fail(child(child(sw, s), "nodes"), "duplicate node count");
    }
    if (!labels.insert(c->bank.sets[s].label).second) {
      fail(child(child(sw, s), "label"), "duplicate label");
    }
  }
}

void parse_synthesis(const json& j, const std::string& where, Config* c) {
  object_at(j, where);
  reject_unknown(j, where, {"gamma_rel", "tolerances"});
  if (j.contains("gamma_rel")) {
    c->gamma_rel = number(j["gamma_rel"], child(where, "gamma_rel"));
    if (!(c->gamma_rel >= 1.0)) fail(child(where, "gamma_rel"), "must be >= 1");
  }
  if (auto it = j.find("tolerances"); it != j.end()) {
    const std::string tw = child(where, "tolerances");
    object_at(*it, tw);
    reject_unknown(*it, tw,
                   {"hurwitz_margin", "are_residual", "hinf_abs_tol", "det_zero"});
    NumericSettings& s = c->settings;
    if (it->contains("hurwitz_margin")) s.hurwitz_margin = positive((*it)["hurwitz_margin"], child(tw, "hurwitz_margin"));
    if (it->contains("are_residual")) s.are_residual = positive((*it)["are_residual"], child(tw, "are_residual"));
    if (it->contains("hinf_abs_tol")) s.hinf_abs_tol = positive((*it)["hinf_abs_tol"], child(tw, "hinf_abs_tol"));
    if (it->contains("det_zero")) s.det_zero = positive((*it)["det_zero"], child(tw, "det_zero"));
  }
}

Event parse_event(const json& j, const std::string& where, Eigen::Index n) {
  object_at(j, where);
  reject_unknown(j, where, {"t", "kind", "agents", "initial_states", "set"});
  Event e;
  e.time = number(member(j, "t", where), child(where, "t"));
  const std::string kind = string(member(j, "kind", where), child(where, "kind"));
  if (kind == "remove") {
    e.kind = Event::Kind::kRemove;
    e.agents = ids(member(j, "agents", where), child(where, "agents"));
    if (e.agents.empty()) fail(child(where, "agents"), "remove lists no agents");
  } else if (kind == "add") {
    e.kind = Event::Kind::kAdd;
    if (j.contains("agents")) e.agents = ids(j["agents"], child(where, "agents"));
    e.initial_states = states(member(j, "initial_states", where),
                              child(where, "initial_states"), n);
    if (e.initial_states.empty()) {
      fail(child(where, "initial_states"), "add carries no initial states");
    }
    if (!e.agents.empty() && e.agents.size() != e.initial_states.size()) {
      fail(child(where, "agents"), "one id per initial state is required");
    }
  } else if (kind == "switch_set") {
    e.kind = Event::Kind::kSwitchSet;
    e.set_label = string(member(j, "set", where), child(where, "set"));
  } else {
    fail(child(where, "kind"), "expected remove, add or switch_set");
  }
  return e;
}

void parse_scenario(const json& j, const std::string& where, Config* c) {
  object_at(j, where);
  reject_unknown(j, where, {"dt", "t_end", "switch_period", "cases"});
  if (j.contains("dt")) c->dt = positive(j["dt"], child(where, "dt"));
  if (j.contains("t_end")) c->t_end = positive(j["t_end"], child(where, "t_end"));
  if (j.contains("switch_period")) {
    c->switch_period = positive(j["switch_period"], child(where, "switch_period"));
  }
  if (!j.contains("cases")) return;
  const Eigen::Index n = c->A.rows();
  const Eigen::Index m = c->B.cols();
  const std::string cw = child(where, "cases");
  const json& cases = array(j["cases"], cw);
  std::set<int> seen;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const std::string w = child(cw, k);
    object_at(cases[k], w);
    reject_unknown(cases[k], w,
                   {"id", "description", "initial_states", "events", "runs"});
    CaseSpec cs;
    cs.id = integer(member(cases[k], "id", w), child(w, "id"));
    if (!seen.insert(cs.id).second) fail(child(w, "id"), "duplicate case id");
    if (cases[k].contains("description")) {
      cs.description = string(cases[k]["description"], child(w, "description"));
    }
    cs.initial_states = states(member(cases[k], "initial_states", w),
                               child(w, "initial_states"), n);
    if (cs.initial_states.empty()) {
      fail(child(w, "initial_states"), "case has no agents");
    }
    if (cases[k].contains("events")) {
      const std::string ew = child(w, "events");
      const json& events = array(cases[k]["events"], ew);
      double last = -1.0;
      for (std::size_t e = 0; e < events.size(); ++e) {
        cs.events.push_back(parse_event(events[e], child(ew, e), n));
        if (!(cs.events.back().time > last)) {
          fail(child(child(ew, e), "t"), "event times must increase strictly");
        }
        if (cs.events.back().time >= c->t_end) {
          fail(child(child(ew, e), "t"), "event time must be below t_end");
        }
        last = cs.events.back().time;
      }
    }
    const std::string rw = child(w, "runs");
    if (cases[k].contains("runs")) {
      const json& runs = array(cases[k]["runs"], rw);
      for (std::size_t r = 0; r < runs.size(); ++r) {
        const std::string w2 = child(rw, r);
        object_at(runs[r], w2);
        reject_unknown(runs[r], w2, {"label", "dA", "dB"});
        CaseRun run;
        run.label = string(member(runs[r], "label", w2), child(w2, "label"));
        run.dA = runs[r].contains("dA")
                     ? matrix(runs[r]["dA"], child(w2, "dA"), n, n)
                     : Matrix::Zero(n, n);
        run.dB = runs[r].contains("dB")
                     ? matrix(runs[r]["dB"], child(w2, "dB"), n, m)
                     : Matrix::Zero(n, m);
        cs.runs.push_back(std::move(run));
      }
    }
    if (cs.runs.empty()) {
      cs.runs.push_back({"nominal", Matrix::Zero(n, n), Matrix::Zero(n, m)});
    }
    c->cases.push_back(std::move(cs));
  }
}

void parse_output(const json& j, const std::string& where, Config* c) {
  object_at(j, where);
  reject_unknown(j, where, {"directory", "formats"});
  if (j.contains("directory")) {
    c->output_directory = string(j["directory"], child(where, "directory"));
  }
  if (j.contains("formats")) {
    const std::string fw = child(where, "formats");
    const json& formats = array(j["formats"], fw);
    c->output_formats.clear();
    for (std::size_t i = 0; i < formats.size(); ++i) {
      const std::string f = string(formats[i], child(fw, i));
      if (f != "csv" && f != "json") fail(child(fw, i), "expected csv or json");
      c->output_formats.push_back(f);
    }
  }
}

}  // namespace

const CaseSpec& Config::find_case(int id) const {
  for (const CaseSpec& c : cases) {
    if (c.id == id) return c;
  }
  throw Error(ErrorKind::kConfig, "no case with id " + std::to_string(id));
}

Config parse_config(const json& doc) {
  object_at(doc, "");
  reject_unknown(doc, "", {"agent", "topology", "synthesis", "scenario", "output"});
  Config c;
  parse_agent(member(doc, "agent", ""), "/agent", &c);
  parse_topology(member(doc, "topology", ""), "/topology", &c);
  if (doc.contains("synthesis")) parse_synthesis(doc["synthesis"], "/synthesis", &c);
  if (doc.contains("scenario")) parse_scenario(doc["scenario"], "/scenario", &c);
  if (doc.contains("output")) parse_output(doc["output"], "/output", &c);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw Error(ErrorKind::kConfig, "cannot read config file " + path.string());
  }
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kConfig,
                "invalid JSON in " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json matrix_to_json(const Matrix& M) {
  json out = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
    out.push_back(row);
  }
  return out;
}

json to_json(const Config& c) {
  json doc;
  doc["agent"] = {
      {"A", matrix_to_json(c.A)},
      {"B", matrix_to_json(c.B)},
      {"C", matrix_to_json(c.C)},
      {"perturbation",
       {{"dA_lower", matrix_to_json(c.box.dA_lower)},
        {"dA_upper", matrix_to_json(c.box.dA_upper)},
        {"dB_lower", matrix_to_json(c.box.dB_lower)},
        {"dB_upper", matrix_to_json(c.box.dB_upper)},
        {"grid_count", c.box.grid_count}}}};
  json sets = json::array();
  for (const GraphSet& s : c.bank.sets) {
    json graphs = json::array();
    for (const Graph& g : s.graphs) {
      json edges = json::array();
      for (auto [i, j] : g.edges()) edges.push_back({i, j});
      graphs.push_back({{"name", g.name()}, {"edges", edges}});
    }
    sets.push_back({{"label", s.label}, {"nodes", s.nodes}, {"graphs", graphs}});
  }
  doc["topology"] = {{"sets", sets}};
  doc["synthesis"] = {
      {"gamma_rel", c.gamma_rel},
      {"tolerances",
       {{"hurwitz_margin", c.settings.hurwitz_margin},
        {"are_residual", c.settings.are_residual},
        {"hinf_abs_tol", c.settings.hinf_abs_tol},
        {"det_zero", c.settings.det_zero}}}};
  json cases = json::array();
  for (const CaseSpec& cs : c.cases) {
    json init = json::array();
    for (const Vector& x : cs.initial_states) init.push_back(vector_to_json(x));
    json events = json::array();
    for (const Event& e : cs.events) {
      json ev = {{"t", e.time}, {"kind", to_string(e.kind)}};
      if (e.kind == Event::Kind::kSwitchSet) {
        ev["set"] = e.set_label;
      } else {
        ev["agents"] = e.agents;
      }
      if (e.kind == Event::Kind::kAdd) {
        json s = json::array();
        for (const Vector& x : e.initial_states) s.push_back(vector_to_json(x));
        ev["initial_states"] = s;
      }
      events.push_back(ev);
    }
    json runs = json::array();
    for (const CaseRun& r : cs.runs) {
      runs.push_back({{"label", r.label},
                      {"dA", matrix_to_json(r.dA)},
                      {"dB", matrix_to_json(r.dB)}});
    }
    cases.push_back({{"id", cs.id},
                     {"description", cs.description},
                     {"initial_states", init},
                     {"events", events},
                     {"runs", runs}});
  }
  doc["scenario"] = {{"dt", c.dt},
                     {"t_end", c.t_end},
                     {"switch_period", c.switch_period},
                     {"cases", cases}};
  doc["output"] = {{"directory", c.output_directory},
                   {"formats", c.output_formats}};
  return doc;
}

json controller_to_json(const Controller& K) {
  return {{"K_A", matrix_to_json(K.K_A)},
          {"K_B", matrix_to_json(K.K_B)},
          {"K_C", matrix_to_json(K.K_C)},
          {"K_D", matrix_to_json(K.K_D)}};
}

Controller controller_from_json(const json& doc) {
  object_at(doc, "");
  Controller K;
  K.K_A = matrix(member(doc, "K_A", ""), "/K_A");
  const Eigen::Index nk = K.K_A.rows();
  if (K.K_A.cols() != nk) fail("/K_A", "K_A must be square");
  K.K_B = matrix(member(doc, "K_B", ""), "/K_B", nk);
  K.K_C = matrix(member(doc, "K_C", ""), "/K_C", -1, nk);
  K.K_D = matrix(member(doc, "K_D", ""), "/K_D", K.K_C.rows(), K.K_B.cols());
  return K;
}

}  // namespace robcons
