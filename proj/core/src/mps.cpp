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


#include <cmath>
#include <fstream>
#include <sstream>

#include "emdarp/errors.hpp"
#include "emdarp/model_io.hpp"

namespace emdarp {
namespace {

std::string num(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

std::string row_name(std::size_t i) { return "C" + std::to_string(i); }

char row_type(Sense s) {
  switch (s) {
    case Sense::LessEqual:
      return 'L';
    case Sense::GreaterEqual:
      return 'G';
    case Sense::Equal:
      return 'E';
  }
  return 'E';
}

}  // namespace

void write_mps(const MilpModel& model, std::ostream& out) {
  const VariableCatalog& vars = model.vars;
  const std::size_t n = vars.size();

  // Column-major view of the rows.
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(n);
  for (std::size_t i = 0; i < model.rows.size(); ++i) {
    for (const Term& t : model.rows[i].expr.terms()) cols[t.var].push_back({i, t.coef});
  }
  std::vector<double> obj(n, 0.0);
  for (const Term& t : model.objective.terms()) obj[t.var] += t.coef;

  out << "NAME " << (model.name.empty() ? "emdarp" : model.name) << "\n";
  out << "* objective offset " << num(model.objective_offset) << "\n";
  out << "ROWS\n N OBJ\n";
  for (std::size_t i = 0; i < model.rows.size(); ++i) {
    out << " " << row_type(model.rows[i].sense) << " " << row_name(i) << "\n";
  }

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (VarIndex v = 0; v < n; ++v) {
    const bool integral = vars[v].type != VarType::Continuous;
    if (integral != in_int) {
      out << " MARKER" << marker++ << " 'MARKER' " << (integral ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = integral;
    }
    const std::string& name = vars[v].name;
    // Every column appears at least once so readers see it.
    if (obj[v] != 0.0 || cols[v].empty()) out << " " << name << " OBJ " << num(obj[v]) << "\n";
    for (const auto& [row, coef] : cols[v]) {
      out << " " << name << " " << row_name(row) << " " << num(coef) << "\n";
    }
  }
  if (in_int) out << " MARKER" << marker << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  for (std::size_t i = 0; i < model.rows.size(); ++i) {
    if (model.rows[i].rhs != 0.0) out << " RHS " << row_name(i) << " " << num(model.rows[i].rhs) << "\n";
  }

  out << "BOUNDS\n";
  for (VarIndex v = 0; v < n; ++v) {
    const Variable& var = vars[v];
    const std::string& name = var.name;
    const bool integral = var.type != VarType::Continuous;
    if (var.lower == var.upper) {
      out << " FX BND " << name << " " << num(var.lower) << "\n";
      continue;
    }
    if (std::isinf(var.lower)) {
      out << " MI BND " << name << "\n";
    } else if (var.lower != 0.0 || integral) {
      out << " LO BND " << name << " " << num(var.lower) << "\n";
    }
    if (std::isinf(var.upper)) {
      if (integral) out << " PL BND " << name << "\n";
    } else {
      out << " UP BND " << name << " " << num(var.upper) << "\n";
    }
  }
  out << "ENDATA\n";
}

std::string to_mps(const MilpModel& model) {
  std::ostringstream os;
  write_mps(model, os);
  return os.str();
}

void write_mps(const MilpModel& model, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  write_mps(model, f);
  f.flush();
  if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace emdarp
