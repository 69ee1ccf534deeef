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


#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>

#include "emdarp/errors.hpp"
#include "emdarp/model_io.hpp"
#include "emdarp/solver.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace emdarp;

namespace {

MilpModel one_binary() {
  MilpModel m;
  m.name = "tiny";
  const VarIndex a = m.vars.add({"a", VarClass::X, 0.0, 1.0, VarType::Binary});
  const VarIndex b = m.vars.add({"b", VarClass::T, -std::numeric_limits<double>::infinity(), 4.5,
                                 VarType::Continuous});
  m.objective.add(a, 2.0);
  m.objective_offset = 7.0;
  Constraint c;
  c.tag = "x";
  c.expr.add(a, 1.0).add(b, -1.0);
  c.sense = Sense::GreaterEqual;
  c.rhs = 0.5;
  m.rows.push_back(c);
  return m;
}

// Counts what a reader would see: ROWS entries (minus the objective) and
// distinct column names.
std::pair<std::size_t, std::size_t> mps_shape(const std::string& text) {
  std::istringstream in(text);
  std::string line, section;
  std::size_t rows = 0;
  std::map<std::string, int> cols;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*') continue;
    if (line[0] != ' ') {
      section = line.substr(0, line.find(' '));
      continue;
    }
    std::istringstream f(line);
    std::string a, b;
    f >> a >> b;
    if (section == "ROWS" && a != "N") ++rows;
    if (section == "COLUMNS" && b != "'MARKER'") cols[a] = 1;
  }
  return {rows, cols.size()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "emdarp-test-XXXXXX").string();
    path = ::mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path write(const std::string& name, const std::string& body) const {
    std::ofstream(path / name) << body;
    return path / name;
  }
};

struct Solved {
  Instance in;
  ExpandedGraph g;
  MilpModel m;
  RoutePlan plan;
};

Solved solve_line(Instance in = testing::line_instance()) {
  ExpandedGraph g = ExpandedGraph::build(in);
  MilpModel m = build_model(in, g);
  SolveResult r = branch_and_bound(in, g);
  REQUIRE(r.has_plan);
  return {in, std::move(g), std::move(m), std::move(r.plan)};
}

}  // namespace

TEST_CASE("mps of a hand-built model") {
  const std::string text = to_mps(one_binary());
  CHECK(text.rfind("NAME tiny\n", 0) == 0);
  CHECK(text.find("* objective offset 7\n") != std::string::npos);
  CHECK(text.find(" G C0\n") != std::string::npos);
  CHECK(text.find(" MARKER0 'MARKER' 'INTORG'\n a OBJ 2\n a C0 1\n MARKER1 'MARKER' 'INTEND'\n") !=
        std::string::npos);
  CHECK(text.find(" RHS C0 0.5\n") != std::string::npos);
  CHECK(text.find(" LO BND a 0\n UP BND a 1\n") != std::string::npos);
  CHECK(text.find(" MI BND b\n UP BND b 4.5\n") != std::string::npos);
  CHECK(text.substr(text.size() - 7) == "ENDATA\n");
}

TEST_CASE("mps of a built model has every row and column") {
  Instance in = testing::line_instance();
  in.stations.push_back({0, Point{25, 5}, 0.0});
  in.duplicate_visits = 1;
  const MilpModel m = build_model(in);
  const std::string text = to_mps(m);
  const auto [rows, cols] = mps_shape(text);
  CHECK(rows == m.rows.size());
  CHECK(cols == m.vars.size());
  CHECK(text == to_mps(build_model(in)));

  TempDir dir;
  write_mps(m, dir.path / "m.mps");
  std::ifstream f(dir.path / "m.mps", std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == text);
}

TEST_CASE("solution text parsing") {
  SUBCASE("values, comments and objective") {
    const Solution s = parse_solution("# header\nobjective 12.5\nx_0_0_1 1\n\nT 3e1\n");
    REQUIRE(s.objective_reported);
    CHECK(*s.objective_reported == 12.5);
    CHECK(s.values.at("x_0_0_1") == 1.0);
    CHECK(s.values.at("T") == 30.0);
  }
  SUBCASE("malformed number") {
    CHECK_THROWS_AS(parse_solution("x_0_0_1 one\n"), ParseError);
  }
  SUBCASE("duplicate name") {
    CHECK_THROWS_WITH_AS(parse_solution("T 1\nT 2\n"), "line 2: duplicate variable 'T'", ParseError);
  }
  SUBCASE("unknown name against a catalog") {
    const MilpModel m = build_model(testing::line_instance());
    CHECK_THROWS_WITH_AS(parse_solution("T 1\nbogus 2\n", &m.vars), "line 2: unknown variable 'bogus'",
                         ParseError);
    CHECK_NOTHROW(parse_solution("T 1\n", &m.vars));
  }
}

TEST_CASE("solution values fill gaps with zero and say so") {
  const MilpModel m = build_model(testing::line_instance());
  Solution s;
  s.values["T"] = 4.0;
  std::vector<std::string> warn;
  const auto v = solution_values(m, s, &warn);
  CHECK(v.size() == m.vars.size());
  CHECK(v[*m.vars.find("T")] == 4.0);
  CHECK(warn.size() == 1);
  s.values["nope"] = 1.0;
  CHECK_THROWS_AS(solution_values(m, s), DecodeError);
}

TEST_CASE("save and reload a solution") {
  const Solved s = solve_line();
  const auto values = encode_plan(s.m, s.in, s.g, s.plan);
  TempDir dir;
  save_solution(s.m, values, dir.path / "a.sol");
  const Solution back = load_solution(dir.path / "a.sol", &s.m.vars);
  REQUIRE(back.objective_reported);
  CHECK(*back.objective_reported == doctest::Approx(s.m.objective_value(values)));
  const auto v = solution_values(s.m, back);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == values[i]);
}

TEST_CASE("encode then decode reproduces the plan") {
  Solved s = solve_line();
  for (bool minimal : {false, true}) {
    const auto values = encode_plan(s.m, s.in, s.g, s.plan, {minimal});
    CHECK(violated_rows(s.m, values, 1e-6).empty());
    CHECK(violated_bounds(s.m, values, 1e-6, 1e-6).empty());
    CHECK(s.m.objective_value(values) == doctest::Approx(s.plan.objective));
    const RoutePlan back = decode_solution(s.m, values, s.in, s.g);
    CHECK(back.sequence(0, false) == s.plan.sequence(0, false));
    CHECK(back.accepted == s.plan.accepted);
    CHECK(back.objective == doctest::Approx(s.plan.objective));
  }
}

TEST_CASE("decode rejects broken assignments") {
  Instance in = testing::line_instance();
  testing::add_request(in, 12, 18);
  Solved s = solve_line(in);
  auto values = encode_plan(s.m, s.in, s.g, s.plan);
  const auto seq = s.plan.sequence(0, false);
  REQUIRE(seq.size() >= 3);
  auto arc = [&](NodeId i, NodeId j) {
    const VarIndex v = s.m.vars.x(0, i, j);
    REQUIRE(v != kNoVar);
    return v;
  };
  SUBCASE("fractional arc") {
    values[arc(seq[0], seq[1])] = 0.5;
    CHECK_THROWS_AS(decode_solution(s.m, values, s.in, s.g), DecodeError);
  }
  SUBCASE("start leaves twice") {
    for (NodeId n : s.g.successors(seq[0])) {
      if (n != seq[1]) {
        values[arc(seq[0], n)] = 1.0;
        break;
      }
    }
    CHECK_THROWS_AS(decode_solution(s.m, values, s.in, s.g), DecodeError);
  }
  SUBCASE("acceptance without a route") {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) values[arc(seq[i], seq[i + 1])] = 0.0;
    CHECK_THROWS_AS(decode_solution(s.m, values, s.in, s.g), DecodeError);
  }
  SUBCASE("shape mismatch") {
    values.pop_back();
    CHECK_THROWS(decode_solution(s.m, values, s.in, s.g));
  }
}

TEST_CASE("external solver through a shell script") {
  const MilpModel m = build_model(testing::line_instance());
  TempDir dir;
  ExternalConfig cfg;

  SUBCASE("writes a solution") {
    const fs::path sh = dir.write(
        "ok.sh", "test -s \"$1\" || exit 9\nprintf 'objective 5\\nT 5\\ny_0 1\\n' > \"$2\"\n");
    cfg.command = "sh " + sh.string() + " {model} {solution}";
    const Solution s = run_external(m, cfg);
    CHECK(s.status == PlanStatus::Optimal);
    CHECK(s.values.at("T") == 5.0);
    CHECK(*s.objective_reported == 5.0);
  }
  SUBCASE("mapped exit code without output") {
    const fs::path sh = dir.write("inf.sh", "exit 2\n");
    cfg.command = "sh " + sh.string() + " {model} {solution}";
    const Solution s = run_external(m, cfg);
    CHECK(s.status == PlanStatus::Infeasible);
    CHECK(s.values.empty());
  }
  SUBCASE("timeout kills the process group") {
    const fs::path sh = dir.write("slow.sh", "sleep 30\n");
    cfg.command = "sh " + sh.string() + " {model} {solution}";
    cfg.timeout_seconds = 0.3;
    const auto t0 = std::chrono::steady_clock::now();
    const Solution s = run_external(m, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(s.status == PlanStatus::Unknown);
    CHECK(secs < 10.0);
  }
  SUBCASE("missing executable") {
    cfg.command = "emdarp-no-such-solver {model} {solution}";
    CHECK_THROWS_AS(run_external(m, cfg), SpawnError);
  }
  SUBCASE("placeholders are required") {
    cfg.command = "true";
    CHECK_THROWS(run_external(m, cfg));
  }
}

TEST_CASE("external config file") {
  TempDir dir;
  const fs::path p = dir.write(
      "cfg.json",
      R"({"command": "x {model} {solution}", "timeout_seconds": 12, "exit_codes": {"7": "feasible"}})");
  const ExternalConfig c = load_external_config(p);
  CHECK(c.command == "x {model} {solution}");
  CHECK(c.timeout_seconds == 12.0);
  CHECK(c.exit_codes.at(7) == PlanStatus::Feasible);
  const fs::path bad = dir.write("bad.json", R"({"command": 3})");
  CHECK_THROWS(load_external_config(bad));
}
