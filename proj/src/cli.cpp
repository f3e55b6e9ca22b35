#include "robcons/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "robcons/case_study.hpp"
#include "robcons/config.hpp"
#include "robcons/graphs.hpp"
#include "robcons/simulator.hpp"
#include "robcons/synthesis.hpp"

namespace robcons {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<double> gamma_rel;
  std::optional<int> grid;
  std::optional<int> case_id;
  std::string scenario_path;
  std::string controller_path;
  bool force = false;
};

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_color_mt("robcons");
    l->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    const char* level = std::getenv("RAI_LOG");
    l->set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
    return l;
  }();
  return log;
}

Config load(const Options& opt) {
  if (opt.config_path.empty()) {
    logger()->info("no --config given, using the built-in case-study config");
    return uuv::default_config();
  }
  logger()->info("loading config {}", opt.config_path);
  return load_config(opt.config_path);
}

fs::path out_dir(const Options& opt, const Config& config) {
  return opt.out_dir.empty() ? fs::path(config.output_directory)
                             : fs::path(opt.out_dir);
}

void write_json(const fs::path& path, const json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) {
    throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  }
  os << doc.dump(2) << '\n';
}

PlantFamily family_for(const Config& config) {
  const EigenvaluePool pool = build_eigenvalue_pool(config.bank);
  return build_plant_family(config.A, config.B, config.C, pool, config.settings);
}

json report_to_json(const MarginReport& r) {
  return {{"b_max", r.b_max},
          {"b_max_riccati", r.b_max_riccati},
          {"eps_cp", r.eps_cp},
          {"psi_max", r.psi_max},
          {"cp_index", r.cp_index + 1},
          {"cp_lambda", r.cp_lambda},
          {"nominal_ok", r.nominal_ok},
          {"robust_ok", r.robust_ok},
          {"psi", r.psi_values}};
}

void print_report(std::ostream& out, const MarginReport& r) {
  fmt::print(out, "central plant: #{} (lambda = {:.6g})\n", r.cp_index + 1,
             r.cp_lambda);
  fmt::print(out, "b_max   = {:.6f}\n", r.b_max);
  fmt::print(out, "eps_cp  = {:.6f}\n", r.eps_cp);
  fmt::print(out, "psi_max = {:.6f} over {} grid points\n", r.psi_max,
             r.psi_values.size());
  fmt::print(out, "nominal condition b_max > eps_cp:  {}\n",
             r.nominal_ok ? "holds" : "FAILS");
  fmt::print(out, "robust condition  b_max > psi_max: {}\n",
             r.robust_ok ? "holds" : "FAILS");
}

int cmd_spectra(const Options& opt, std::ostream& out) {
  const Config config = load(opt);
  const EigenvaluePool pool = build_eigenvalue_pool(config.bank);
  for (const GraphSet& s : config.bank.sets) {
    for (const Graph& g : s.graphs) {
      const auto ev = nonzero_laplacian_eigenvalues(g);
      std::string list;
      for (std::size_t i = 0; i < ev.size(); ++i) {
        list += (i ? "," : "") + fmt::format("{:.6g}", ev[i]);
      }
      fmt::print(out, "{}/{}: {}\n", s.label, g.name(), list);
    }
  }
  std::string list;
  for (std::size_t i = 0; i < pool.lambdas.size(); ++i) {
    list += (i ? "," : "") + fmt::format("{:.6g}", pool.lambdas[i]);
  }
  fmt::print(out, "pool: {}\n", list);
  fmt::print(out, "xi = {}\n", pool.xi());
  return kExitOk;
}

int cmd_margin(const Options& opt, std::ostream& out) {
  Config config = load(opt);
  if (opt.grid) config.box.grid_count = *opt.grid;
  const PlantFamily family = family_for(config);
  logger()->info("checking conditions over {} plants", family.size());
  const MarginReport report = check_conditions(family, config.box, config.settings);
  print_report(out, report);
  const fs::path dir = out_dir(opt, config);
  write_json(dir / "margin.json", report_to_json(report));
  logger()->info("wrote {}", (dir / "margin.json").string());
  return kExitOk;
}

int cmd_synth(const Options& opt, std::ostream& out, std::ostream& err) {
  Config config = load(opt);
  if (opt.grid) config.box.grid_count = *opt.grid;
  if (opt.gamma_rel) config.gamma_rel = *opt.gamma_rel;
  const PlantFamily family = family_for(config);
  const MarginReport report = check_conditions(family, config.box, config.settings);
  print_report(out, report);
  if (!report.robust_ok) {
    if (!opt.force) {
      fmt::print(err,
                 "robust condition fails (b_max {:.6f} <= psi_max {:.6f}); "
                 "rerun with --force to synthesize anyway\n",
                 report.b_max, report.psi_max);
      return kExitRobustConditionFailed;
    }
    logger()->warn("robust condition fails, continuing because of --force");
  }
  const SynthesisResult syn = synthesize_controller(
      family.plants[report.cp_index], config.gamma_rel, config.settings);
  json doc = controller_to_json(syn.K);
  doc["gamma_rel"] = syn.gamma_rel;
  doc["gamma"] = syn.gamma;
  doc["b_max"] = syn.b_max;
  doc["margin"] = syn.margin;
  doc["cp_lambda"] = report.cp_lambda;
  const fs::path path = out_dir(opt, config) / "controller.json";
  write_json(path, doc);
  fmt::print(out, "gamma_rel = {:.6g}, gamma = {:.6f}\n", syn.gamma_rel, syn.gamma);
  fmt::print(out, "achieved b_(P_cp,K) = {:.6f}\n", syn.margin);
  fmt::print(out, "controller written to {}\n", path.string());
  return kExitOk;
}

Controller load_controller(const fs::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw Error(ErrorKind::kInvalidArgument,
                "controller file " + path.string() +
                    " not found; run `robcons synth` first");
  }
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kConfig, "invalid controller JSON: " + std::string(e.what()));
  }
  return controller_from_json(doc);
}

void emit(const SimResult& r, const fs::path& dir, const Config& config) {
  for (const std::string& f : config.output_formats) {
    if (f == "csv") {
      write_trajectories_csv(r, dir / "trajectories.csv");
      write_disagreement_csv(r, dir / "disagreement.csv");
    } else if (f == "json") {
      write_meta_json(r, dir / "meta.json");
    }
  }
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  Config config = load(opt);
  const fs::path dir = out_dir(opt, config);
  const Controller K = load_controller(
      opt.controller_path.empty() ? dir / "controller.json"
                                  : fs::path(opt.controller_path));
  std::vector<SimResult> results;
  fs::path base;
  if (!opt.scenario_path.empty()) {
    std::ifstream is(opt.scenario_path);
    if (!is) {
      throw Error(ErrorKind::kConfig, "cannot read scenario " + opt.scenario_path);
    }
    json scenario_doc;
    try {
      scenario_doc = json::parse(is);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kConfig, "invalid scenario JSON: " + std::string(e.what()));
    }
    json doc = to_json(config);
    doc["scenario"]["cases"] = json::array({scenario_doc});
    config = parse_config(doc);
    const int id = config.cases.front().id;
    results = run_case_study(config, id, K);
    base = dir / "custom";
  } else {
    if (!opt.case_id) {
      throw Error(ErrorKind::kConfig, "simulate needs --case or --scenario");
    }
    results = run_case_study(config, *opt.case_id, K);
    base = dir / ("case" + std::to_string(*opt.case_id));
  }
  for (const SimResult& r : results) {
    const fs::path run_dir = base / r.label;
    emit(r, run_dir, config);
    std::string counts;
    for (const Segment& s : r.segments) {
      counts += (counts.empty() ? "" : " -> ") + std::to_string(s.agents.size());
    }
    fmt::print(out, "{}: agents {}; final disagreement {:.3e}\n", r.label,
               counts, r.disagreement.back());
    logger()->info("wrote {}", run_dir.string());
  }
  return kExitOk;
}

int cmd_seed_config(std::ostream& out) {
  out << to_json(uuv::default_config()).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return kExitConfig;
    case ErrorKind::kNotConnected: return kExitDisconnected;
    case ErrorKind::kNoStabilizingSolution:
    case ErrorKind::kSingularSubspace:
    case ErrorKind::kFactorizationFailed:
    case ErrorKind::kNotDetectable:
    case ErrorKind::kNotStabilizable:
      return kExitFactorization;
    case ErrorKind::kMarginShortfall: return kExitMarginShortfall;
    case ErrorKind::kEventGraphMismatch: return kExitEventGraphMismatch;
    default: return kExitFailure;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Robust consensus protocol synthesis and simulation", "robcons"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Configuration JSON file");
    sub->add_option("--out", opt.out_dir, "Output directory");
  };
  CLI::App* spectra = app.add_subcommand("spectra", "Laplacian spectra and the eigenvalue pool");
  add_common(spectra);
  CLI::App* margin = app.add_subcommand("margin", "Nominal and robust stability conditions");
  add_common(margin);
  margin->add_option("--grid", opt.grid, "Samples per perturbed entry")->check(CLI::Range(2, 100000));
  CLI::App* synth = app.add_subcommand("synth", "Synthesize the consensus protocol");
  add_common(synth);
  synth->add_option("--grid", opt.grid, "Samples per perturbed entry")->check(CLI::Range(2, 100000));
  synth->add_option("--gamma-rel", opt.gamma_rel, "Sub-optimality factor (>= 1)")->check(CLI::Range(1.0, 1e6));
  synth->add_flag("--force", opt.force, "Synthesize even if the robust condition fails");
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Simulate a case study");
  add_common(simulate_cmd);
  auto* case_opt = simulate_cmd->add_option("--case", opt.case_id, "Case id");
  auto* scen_opt = simulate_cmd->add_option("--scenario", opt.scenario_path, "Custom case JSON file");
  case_opt->excludes(scen_opt);
  simulate_cmd->add_option("--controller", opt.controller_path,
                           "Controller JSON (default OUT/controller.json)");
  CLI::App* seed = app.add_subcommand("seed-config", "Print the case-study configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (spectra->parsed()) return cmd_spectra(opt, out);
    if (margin->parsed()) return cmd_margin(opt, out);
    if (synth->parsed()) return cmd_synth(opt, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(opt, out);
    if (seed->parsed()) return cmd_seed_config(out);
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace robcons
