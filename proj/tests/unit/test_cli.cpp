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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run emdarp_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = emdarp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Workdir {
  fs::path dir;
  Workdir() {
    std::string tmpl = (fs::temp_directory_path() / "emdarp-cli-XXXXXX").string();
    dir = ::mkdtemp(tmpl.data());
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

// Small generated instance on disk.
std::string make_instance(const Workdir& w) {
  const std::string path = w / "inst.json";
  const Run r = emdarp_cli({"gen", "--seed", "3", "--requests", "2", "--agents", "1", "--stations",
                            "1", "--dups", "0", "--out", path});
  REQUIRE(r.code == 0);
  return path;
}

}  // namespace

TEST_CASE("cli: help and usage errors") {
  CHECK(emdarp_cli({"--help"}).code == 0);
  CHECK(emdarp_cli({"solve", "--help"}).code == 0);
  CHECK(emdarp_cli({"frobnicate"}).code == 4);
  CHECK(emdarp_cli({"solve"}).code == 4);
}

TEST_CASE("cli: gen writes to stdout without --out") {
  const Run r = emdarp_cli({"gen", "--seed", "9", "--requests", "3"});
  CHECK(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("requests").size() == 3);
  CHECK(emdarp_cli({"gen", "--seed", "9", "--requests", "3"}).out == r.out);
}

TEST_CASE("cli: validate") {
  Workdir w;
  const std::string inst = make_instance(w);
  Run r = emdarp_cli({"validate", inst});
  CHECK(r.code == 0);
  CHECK(r.out.find("valid") != std::string::npos);

  std::ofstream(w / "bad.json") << R"({"requests": 1})";
  r = emdarp_cli({"--format", "json", "validate", w / "bad.json"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out).at("ok") == false);

  CHECK(emdarp_cli({"validate", w / "missing.json"}).code == 4);
}

TEST_CASE("cli: build exports the same bytes every time") {
  Workdir w;
  const std::string inst = make_instance(w);
  const Run a = emdarp_cli({"build", inst, "--out", w / "a.mps"});
  const Run b = emdarp_cli({"build", inst, "--out", w / "b.mps"});
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  const std::string ma = slurp(w / "a.mps");
  CHECK_FALSE(ma.empty());
  CHECK(ma == slurp(w / "b.mps"));
  CHECK(std::hash<std::string>{}(ma) == std::hash<std::string>{}(slurp(w / "b.mps")));
  // Statistics match; only the "wrote <path>" line differs.
  CHECK(a.out.substr(0, a.out.find("wrote")) == b.out.substr(0, b.out.find("wrote")));
}

TEST_CASE("cli: solve, check and tamper") {
  Workdir w;
  const std::string inst = make_instance(w);
  const std::string plan = w / "p.json";
  const Run s = emdarp_cli({"solve", inst, "--plan", plan, "--solution", w / "p.sol"});
  REQUIRE(s.code == 0);
  CHECK(fs::exists(w / "p.sol"));

  Run c = emdarp_cli({"--format", "json", "check", inst, plan});
  CHECK(c.code == 0);
  CHECK(json::parse(c.out).at("ok") == true);

  json doc = json::parse(slurp(plan));
  json* target = nullptr;
  for (json& a : doc.at("agents")) {
    if (a.at("stops").size() > 1) target = &a.at("stops")[1];
  }
  REQUIRE(target);
  (*target)["soc"] = 0.05;
  std::ofstream(w / "bad.json") << doc.dump(2);
  c = emdarp_cli({"--format", "json", "check", inst, w / "bad.json"});
  CHECK(c.code == 1);
  const json rep = json::parse(c.out);
  bool cites = false;
  for (const json& v : rep.at("violations")) cites = cites || v.at("tag") == "40";
  CHECK(cites);
}

TEST_CASE("cli: external engine with a canned solver") {
  Workdir w;
  const std::string inst = make_instance(w);
  REQUIRE(emdarp_cli({"solve", inst, "--plan", w / "ref.json", "--solution", w / "ref.sol"}).code ==
          0);
  const std::string script = w / "canned.sh";
  std::ofstream(script) << "cp " << (w / "ref.sol") << " \"$2\"\n";
  const Run r = emdarp_cli({"solve", inst, "--engine", "external", "--solver-cmd",
                            "sh " + script + " {model} {solution}", "--plan", w / "ext.json",
                            "--solution", w / "ext.sol"});
  CHECK(r.code == 0);
  const json a = json::parse(slurp(w / "ref.json"));
  const json b = json::parse(slurp(w / "ext.json"));
  CHECK(b.at("objective").get<double>() == doctest::Approx(a.at("objective").get<double>()));
  CHECK(a.at("requests") == b.at("requests"));
  CHECK(emdarp_cli({"check", inst, w / "ext.json"}).code == 0);

  std::ofstream(w / "infeasible.sh") << "exit 2\n";
  const Run inf = emdarp_cli({"solve", inst, "--engine", "external", "--solver-cmd",
                              "sh " + (w / "infeasible.sh") + " {model} {solution}", "--plan",
                              w / "x.json", "--solution", w / "x.sol"});
  CHECK(inf.code == 2);
}

TEST_CASE("cli: plot") {
  Workdir w;
  const std::string inst = make_instance(w);
  REQUIRE(emdarp_cli({"solve", inst, "--plan", w / "p.json", "--solution", w / "p.sol"}).code == 0);
  CHECK(emdarp_cli({"plot", inst, w / "p.json", "--out", w / "p.svg", "--title", "t"}).code == 0);
  const std::string svg = slurp(w / "p.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);
}
