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


#include <charconv>
#include <fstream>
#include <sstream>

#include "emdarp/errors.hpp"
#include "emdarp/model_io.hpp"

namespace emdarp {
namespace {

std::string_view trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

Solution parse_solution(std::string_view text, const VariableCatalog* catalog) {
  Solution sol;
  std::size_t line_no = 0;
  bool seen_value = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'name value'");
    }
    const std::string name(line.substr(0, sp));
    const std::string_view rest = trim(line.substr(sp));
    if (rest.find_first_of(" \t") != std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": trailing fields after value");
    }
    const double v = parse_number(rest, line_no);

    if (name == "objective" && !seen_value && !sol.objective_reported) {
      sol.objective_reported = v;
      continue;
    }
    seen_value = true;
    if (catalog && !catalog->find(name)) {
      throw ParseError("line " + std::to_string(line_no) + ": unknown variable '" + name + "'");
    }
    if (!sol.values.emplace(name, v).second) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate variable '" + name + "'");
    }
  }
  return sol;
}

Solution load_solution(const std::filesystem::path& path, const VariableCatalog* catalog) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_solution(ss.str(), catalog);
}

void save_solution(const MilpModel& model, std::span<const double> values,
                   const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.imbue(std::locale::classic());
  f.precision(17);
  f << "objective " << model.objective_value(values) << "\n";
  for (VarIndex v = 0; v < model.vars.size(); ++v) {
    if (values[v] != 0.0) f << model.vars[v].name << " " << values[v] << "\n";
  }
  if (!f) throw IoError("failed writing " + path.string());
}

std::vector<double> solution_values(const MilpModel& model, const Solution& solution,
                                    std::vector<std::string>* warnings) {
  std::vector<double> out(model.vars.size(), 0.0);
  std::vector<char> seen(out.size(), 0);
  for (const auto& [name, v] : solution.values) {
    const auto idx = model.vars.find(name);
    if (!idx) throw DecodeError("solution names unknown variable '" + name + "'");
    out[*idx] = v;
    seen[*idx] = 1;
  }
  if (warnings) {
    std::size_t missing = 0;
    for (char s : seen) missing += s ? 0 : 1;
    // Solvers commonly omit zeros, so report a count rather than every name.
    if (missing > 0) {
      warnings->push_back(std::to_string(missing) + " variables absent from the solution, taken as 0");
    }
  }
  return out;
}

}  // namespace emdarp
