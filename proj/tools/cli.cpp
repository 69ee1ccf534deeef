// Copyright 2026 The emdarp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "emdarp/errors.hpp"
#include "emdarp/graph.hpp"
#include "emdarp/instance.hpp"
#include "emdarp/milp.hpp"
#include "emdarp/model_io.hpp"
#include "emdarp/plan.hpp"
#include "emdarp/scenario.hpp"
#include "emdarp/solver.hpp"
#include "emdarp/svg.hpp"
#include "emdarp/validator.hpp"
#include "json.hpp"

namespace emdarp::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Common {
  std::string format = "text";
  bool json() const { return format == "json"; }
};

struct ValidateArgs {
  std::string instance;
};

struct BuildArgs {
  std::string instance;
  std::string out;
};

struct SolveArgs {
  std::string instance;
  std::string engine = "builtin";
  std::uint64_t node_limit = 0;
  double time_limit = 0.0;
  unsigned threads = 1;
  std::string plan;
  std::string solution;
  std::string solver_cmd;
  std::string solver_config;
  double solver_timeout = 0.0;
};

struct CheckArgs {
  std::string instance;
  std::string plan;
  double tol = 1e-6;
};

struct GenArgs {
  GenConfig cfg;
  std::string preset = "typical";
  std::string out;
};

struct PlotArgs {
  std::string instance;
  std::string plan;
  std::string out;
  double width = 800.0;
  double height = 800.0;
  std::string title;
};

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string default_output(const std::string& instance, const std::string& suffix) {
  return fs::path(instance).stem().string() + suffix;
}

// ---- validate ------------------------------------------------------------

int do_validate(const ValidateArgs& a, const Common& c, std::ostream& out) {
  const Instance in = load_instance(a.instance);
  const ExpandedGraph g = expand_graph(in);
  const BigM bm = compute_big_m(in, g);
  if (c.json()) {
    Json j;
    j["ok"] = true;
    j["name"] = in.name;
    j["requests"] = in.num_requests();
    j["agents"] = in.num_agents();
    j["stations"] = in.num_stations();
    j["station_nodes"] = in.num_station_nodes();
    j["depots"] = in.depots.size();
    j["nodes"] = g.num_nodes();
    j["arcs"] = g.arcs().size();
    j["horizon"] = bm.horizon;
    out << j.dump(2) << "\n";
  } else {
    out << "instance " << (in.name.empty() ? a.instance : in.name) << ": valid\n"
        << "  requests " << in.num_requests() << ", agents " << in.num_agents() << ", stations "
        << in.num_stations() << " x " << (in.duplicate_visits + 1) << " visits, depots "
        << in.depots.size() << "\n"
        << "  nodes " << g.num_nodes() << ", arcs " << g.arcs().size() << ", horizon "
        << fixed(bm.horizon, 3) << "\n";
  }
  return kOk;
}

// ---- build ---------------------------------------------------------------

int do_build(const BuildArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const Instance in = load_instance(a.instance);
  const ExpandedGraph g = expand_graph(in);
  const MilpModel m = build_model(in, g);
  for (const std::string& w : m.big_m.warnings) err << "warning: " << w << "\n";
  if (!a.out.empty()) write_mps(m, fs::path(a.out));
  const ModelStats& s = m.stats;
  if (c.json()) {
    Json j;
    j["model"] = m.name;
    j["rows"] = s.num_rows;
    j["vars"] = s.num_vars;
    j["binary"] = s.num_binary;
    j["integer"] = s.num_integer;
    j["arc_vars"] = s.x_count;
    j["big_m"] = {{"horizon", m.big_m.horizon},
                  {"time", m.big_m.time},
                  {"objective", m.big_m.objective},
                  {"overridden", m.big_m.overridden}};
    Json fam = Json::object();
    for (const std::string& tag : known_tags()) {
      const auto it = s.family_counts.find(tag);
      if (it != s.family_counts.end()) fam[tag] = it->second;
    }
    j["families"] = fam;
    j["mps"] = a.out.empty() ? Json(nullptr) : Json(a.out);
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "model " << m.name << "\n"
      << "  rows     " << s.num_rows << "\n"
      << "  vars     " << s.num_vars << " (" << s.num_binary << " binary, " << s.num_integer
      << " integer, " << s.x_count << " arc)\n"
      << "  big-M    time " << fixed(m.big_m.time, 3) << ", objective "
      << fixed(m.big_m.objective, 3) << "\n"
      << "  family   rows\n";
  for (const std::string& tag : known_tags()) {
    const auto it = s.family_counts.find(tag);
    if (it == s.family_counts.end()) continue;
    out << "  " << std::left << std::setw(8) << tag << " " << it->second << "\n";
  }
  if (!a.out.empty()) out << "wrote " << a.out << "\n";
  return kOk;
}

// ---- solve ---------------------------------------------------------------

void print_plan(const ExpandedGraph& g, const Instance& in, const RoutePlan& plan,
                std::ostream& out) {
  for (std::size_t k = 0; k < plan.routes.size(); ++k) {
    out << "  agent " << k << ": " << format_route(g, plan, k, in.variant.open_vrp);
    if (!plan.routes[k].idle()) out << "  duration " << fixed(plan.routes[k].duration, 3);
    out << "\n";
  }
  std::string rejected;
  for (std::size_t r = 0; r < plan.accepted.size(); ++r) {
    if (!plan.accepted[r]) rejected += (rejected.empty() ? "" : ", ") + std::to_string(r);
  }
  if (!rejected.empty()) out << "  rejected: " << rejected << "\n";
}

Json routes_json(const ExpandedGraph& g, const Instance& in, const RoutePlan& plan) {
  Json routes = Json::array();
  for (std::size_t k = 0; k < plan.routes.size(); ++k) {
    routes.push_back(format_route(g, plan, k, in.variant.open_vrp));
  }
  return routes;
}

void write_outputs(const Instance& in, const ExpandedGraph& g, const RoutePlan& plan,
                   const std::string& plan_path, const std::string& sol_path,
                   const MilpModel* model, std::span<const double> values) {
  save_plan(g, plan, plan_path);
  if (model) {
    save_solution(*model, values, sol_path);
    return;
  }
  const MilpModel m = build_model(in, g);
  const std::vector<double> v = encode_plan(m, in, g, plan);
  save_solution(m, v, sol_path);
}

int do_solve(const SolveArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const Instance in = load_instance(a.instance);
  const ExpandedGraph g = expand_graph(in);
  const std::string plan_path = a.plan.empty() ? default_output(a.instance, ".plan.json") : a.plan;
  const std::string sol_path = a.solution.empty() ? default_output(a.instance, ".sol") : a.solution;

  if (a.engine == "external") {
    ExternalConfig cfg;
    if (!a.solver_config.empty()) cfg = load_external_config(a.solver_config);
    if (!a.solver_cmd.empty()) cfg.command = a.solver_cmd;
    if (a.solver_timeout > 0.0) cfg.timeout_seconds = a.solver_timeout;
    const MilpModel m = build_model(in, g);
    const Solution sol = run_external(m, cfg);
    for (const std::string& w : sol.warnings) err << "warning: " << w << "\n";
    Json j;
    j["engine"] = "external";
    j["status"] = std::string(to_string(sol.status));
    if (sol.values.empty()) {
      if (c.json()) {
        out << j.dump(2) << "\n";
      } else {
        out << "status " << to_string(sol.status) << " (no solution)\n";
      }
      return sol.status == PlanStatus::Infeasible ? kInfeasible : kLimit;
    }
    std::vector<std::string> warnings;
    const std::vector<double> values = solution_values(m, sol, &warnings);
    for (const std::string& w : warnings) err << "warning: " << w << "\n";
    const RoutePlan plan = decode_solution(m, values, in, g, sol.status);
    write_outputs(in, g, plan, plan_path, sol_path, &m, values);
    if (c.json()) {
      j["objective"] = plan.objective;
      if (sol.objective_reported) j["objective_reported"] = *sol.objective_reported;
      j["routes"] = routes_json(g, in, plan);
      j["plan"] = plan_path;
      j["solution"] = sol_path;
      out << j.dump(2) << "\n";
    } else {
      out << "status " << to_string(sol.status) << ", objective " << fixed(plan.objective) << "\n";
      print_plan(g, in, plan, out);
      out << "wrote " << plan_path << ", " << sol_path << "\n";
    }
    return kOk;
  }
  if (a.engine != "builtin") throw ParseError("unknown engine '" + a.engine + "'");

  SolveConfig cfg;
  cfg.node_limit = a.node_limit;
  cfg.time_limit = a.time_limit;
  cfg.threads = std::max(1u, a.threads);
  cfg.deterministic = cfg.threads == 1;
  const SolveResult r = branch_and_bound(in, g, cfg);

  const std::string status(to_string(r.plan.status));
  if (r.has_plan) write_outputs(in, g, r.plan, plan_path, sol_path, nullptr, {});
  if (c.json()) {
    Json j;
    j["engine"] = "builtin";
    j["status"] = status;
    j["objective"] = r.has_plan ? Json(r.objective) : Json(nullptr);
    j["bound"] = r.bound;
    j["gap"] = r.gap;
    j["nodes"] = r.nodes;
    j["leaves"] = r.leaves;
    j["seconds"] = r.seconds;
    j["limit"] = r.limit.empty() ? Json(nullptr) : Json(r.limit);
    if (r.has_plan) {
      j["routes"] = routes_json(g, in, r.plan);
      j["plan"] = plan_path;
      j["solution"] = sol_path;
    }
    out << j.dump(2) << "\n";
  } else {
    out << "status " << status;
    if (r.has_plan) out << ", objective " << fixed(r.objective);
    out << ", bound " << fixed(r.bound) << ", gap " << fixed(r.gap, 4) << "\n"
        << "  " << r.nodes << " nodes, " << r.leaves << " leaves, " << fixed(r.seconds, 3)
        << " s";
    if (!r.limit.empty()) out << ", stopped by " << r.limit;
    out << "\n";
    if (r.has_plan) {
      print_plan(g, in, r.plan, out);
      out << "wrote " << plan_path << ", " << sol_path << "\n";
    }
  }
  if (!r.limit.empty()) return kLimit;
  return r.has_plan ? kOk : kInfeasible;
}

// ---- check ---------------------------------------------------------------

int do_check(const CheckArgs& a, const Common& c, std::ostream& out) {
  const Instance in = load_instance(a.instance);
  const ExpandedGraph g = expand_graph(in);
  const RoutePlan plan = load_plan(a.plan, g);
  const ValidationReport rep = validate(in, g, plan, a.tol);
  if (c.json()) {
    out << dump_report(rep);
  } else if (rep.ok()) {
    out << "plan is feasible; objective " << fixed(rep.recomputed_objective) << " (reported "
        << fixed(rep.reported_objective) << ")\n";
  } else {
    out << rep.violations.size() << " violation(s)\n";
    for (const Violation& v : rep.violations) {
      out << "  [" << v.tag << "] " << std::left << std::setw(16) << v.index << " " << v.message
          << " (by " << v.magnitude << ")\n";
    }
    out << "  by family:";
    for (const auto& [tag, n] : rep.counts) out << " " << tag << "=" << n;
    out << "\n";
  }
  return rep.ok() ? kOk : kInvalid;
}

// ---- gen / plot ----------------------------------------------------------

int do_gen(GenArgs a, const Common& c, std::ostream& out) {
  a.cfg.preset = battery_preset_from(a.preset);
  const Instance in = generate(a.cfg);
  if (a.out.empty()) {
    out << dump_instance(in);
    return kOk;
  }
  save_instance(in, a.out);
  if (c.json()) {
    Json j;
    j["out"] = a.out;
    j["name"] = in.name;
    j["requests"] = in.num_requests();
    j["agents"] = in.num_agents();
    out << j.dump(2) << "\n";
  } else {
    out << "wrote " << a.out << "\n";
  }
  return kOk;
}

int do_plot(const PlotArgs& a, const Common& c, std::ostream& out) {
  const Instance in = load_instance(a.instance);
  const ExpandedGraph g = expand_graph(in);
  std::optional<RoutePlan> plan;
  if (!a.plan.empty()) plan = load_plan(a.plan, g);
  PlotSpec spec;
  spec.width = a.width;
  spec.height = a.height;
  spec.title = a.title.empty() ? in.name : a.title;
  const std::string svg = render_svg(in, g, plan ? &*plan : nullptr, spec);
  if (a.out.empty()) {
    out << svg;
    return kOk;
  }
  save_svg(svg, a.out);
  if (c.json()) {
    out << Json{{"out", a.out}}.dump(2) << "\n";
  } else {
    out << "wrote " << a.out << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Electric mobility dial-a-ride toolkit", "emdarp"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--format", common.format, "Output style")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  ValidateArgs va;
  auto* validate_cmd = app.add_subcommand("validate", "Check an instance file");
  validate_cmd->add_option("instance", va.instance)->required();

  BuildArgs ba;
  auto* build_cmd = app.add_subcommand("build", "Build the MILP, print statistics, export MPS");
  build_cmd->add_option("instance", ba.instance)->required();
  build_cmd->add_option("--out", ba.out, "MPS output path");

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("instance", sa.instance)->required();
  solve_cmd->add_option("--engine", sa.engine)
      ->check(CLI::IsMember({"builtin", "external"}))
      ->capture_default_str();
  solve_cmd->add_option("--node-limit", sa.node_limit, "0 = unlimited");
  solve_cmd->add_option("--time-limit", sa.time_limit, "Seconds, 0 = unlimited");
  solve_cmd->add_option("--threads", sa.threads)->capture_default_str();
  solve_cmd->add_option("--plan", sa.plan, "Route plan output (default <stem>.plan.json)");
  solve_cmd->add_option("--solution", sa.solution, "Variable values output (default <stem>.sol)");
  solve_cmd->add_option("--solver-cmd", sa.solver_cmd,
                        "External command with {model} and {solution}; default $EMDARP_SOLVER_CMD");
  solve_cmd->add_option("--solver-config", sa.solver_config, "JSON config for the external solver");
  solve_cmd->add_option("--solver-timeout", sa.solver_timeout, "Seconds");

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check", "Validate a route plan against an instance");
  check_cmd->add_option("instance", ca.instance)->required();
  check_cmd->add_option("plan", ca.plan)->required();
  check_cmd->add_option("--tol", ca.tol)->capture_default_str();

  GenArgs ga;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--seed", ga.cfg.seed)->capture_default_str();
  gen_cmd->add_option("--requests", ga.cfg.n_requests)->capture_default_str();
  gen_cmd->add_option("--agents", ga.cfg.n_agents)->capture_default_str();
  gen_cmd->add_option("--stations", ga.cfg.n_stations)->capture_default_str();
  gen_cmd->add_option("--dups", ga.cfg.duplicate_visits)->capture_default_str();
  gen_cmd->add_option("--depots", ga.cfg.n_depots)->capture_default_str();
  gen_cmd->add_option("--area", ga.cfg.area, "Square side in meters")->capture_default_str();
  gen_cmd->add_option("--preset", ga.preset)
      ->check(CLI::IsMember({"typical", "highdischarge"}))
      ->capture_default_str();
  gen_cmd->add_flag("--selective,!--no-selective", ga.cfg.selective)->capture_default_str();
  gen_cmd->add_flag("--open,!--closed", ga.cfg.open_vrp)->capture_default_str();
  gen_cmd->add_option("--out", ga.out, "Instance output (default stdout)");

  PlotArgs pa;
  auto* plot_cmd = app.add_subcommand("plot", "Draw an instance and optionally a plan as SVG");
  plot_cmd->add_option("instance", pa.instance)->required();
  plot_cmd->add_option("plan", pa.plan);
  plot_cmd->add_option("--out", pa.out, "SVG output (default stdout)");
  plot_cmd->add_option("--width", pa.width)->capture_default_str();
  plot_cmd->add_option("--height", pa.height)->capture_default_str();
  plot_cmd->add_option("--title", pa.title);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << "\n" << sub->help();
    return kIoError;
  }

  auto fail = [&](int code, const std::string& kind, const std::string& msg) {
    if (common.json()) {
      out << Json{{"ok", false}, {"error", kind}, {"message", msg}}.dump(2) << "\n";
    } else {
      err << "error: " << msg << "\n";
    }
    return code;
  };

  try {
    if (validate_cmd->parsed()) return do_validate(va, common, out);
    if (build_cmd->parsed()) return do_build(ba, common, out, err);
    if (solve_cmd->parsed()) return do_solve(sa, common, out, err);
    if (check_cmd->parsed()) return do_check(ca, common, out);
    if (gen_cmd->parsed()) return do_gen(ga, common, out);
    if (plot_cmd->parsed()) return do_plot(pa, common, out);
  } catch (const ParseError& e) {
    return fail(kInvalid, "parse", e.what());
  } catch (const ValidationError& e) {
    return fail(kInvalid, "validation", e.what());
  } catch (const DecodeError& e) {
    return fail(kInvalid, "decode", e.what());
  } catch (const LimitError& e) {
    return fail(kLimit, "limit", e.what());
  } catch (const IoError& e) {
    return fail(kIoError, "io", e.what());
  } catch (const SpawnError& e) {
    return fail(kIoError, "spawn", e.what());
  } catch (const Error& e) {
    return fail(kIoError, "error", e.what());
  }
  return kIoError;
}

}  // namespace emdarp::cli
