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


#include <signal.h>
#include <stdlib.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "emdarp/errors.hpp"
#include "emdarp/model_io.hpp"
#include "json.hpp"

namespace emdarp {
namespace {

void replace_all(std::string& s, std::string_view what, const std::string& with) {
  for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + with.size())) {
    s.replace(pos, what.size(), with);
  }
}

// First word of the command, skipping leading VAR=value assignments.
std::string program_of(const std::string& cmd) {
  std::istringstream is(cmd);
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos && eq > 0 && tok.find('/') > eq) continue;
    return tok;
  }
  return {};
}

bool resolvable(const std::string& prog) {
  if (prog.empty()) return false;
  if (prog.find('/') != std::string::npos) return ::access(prog.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  std::istringstream is(path ? path : "/usr/bin:/bin");
  std::string dir;
  while (std::getline(is, dir, ':')) {
    const std::string full = (dir.empty() ? std::string(".") : dir) + "/" + prog;
    if (::access(full.c_str(), X_OK) == 0) return true;
  }
  return false;
}

std::string tail_of(const std::filesystem::path& p, std::size_t max_bytes = 2000) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  std::string s = ss.str();
  return s.size() > max_bytes ? s.substr(s.size() - max_bytes) : s;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "emdarp-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw IoError("cannot create temporary directory");
    path_ = tmpl;
  }
  ~TempDir() {
    if (keep_) return;
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  void keep() { keep_ = true; }

 private:
  std::filesystem::path path_;
  bool keep_ = false;
};

}  // namespace

std::string default_solver_command() {
  const char* v = std::getenv("EMDARP_SOLVER_CMD");
  return v ? std::string(v) : std::string();
}

ExternalConfig load_external_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  ExternalConfig cfg;
  try {
    cfg.command = doc.value("command", std::string());
    cfg.timeout_seconds = doc.value("timeout_seconds", 0.0);
    cfg.keep_files = doc.value("keep_files", false);
    if (doc.contains("exit_codes")) {
      for (const auto& [code, status] : doc.at("exit_codes").items()) {
        cfg.exit_codes[std::stoi(code)] = plan_status_from(status.get<std::string>());
      }
    }
  } catch (const std::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return cfg;
}

Solution run_external(const MilpModel& model, const ExternalConfig& config) {
  std::string cmd = config.command.empty() ? default_solver_command() : config.command;
  if (cmd.empty()) throw SpawnError("no solver command given and EMDARP_SOLVER_CMD is unset");
  if (cmd.find("{model}") == std::string::npos || cmd.find("{solution}") == std::string::npos) {
    throw SpawnError("solver command needs {model} and {solution} placeholders: " + cmd);
  }
  const std::string prog = program_of(cmd);
  if (!resolvable(prog)) throw SpawnError("solver executable not found: " + prog);

  TempDir dir;
  if (config.keep_files) dir.keep();
  const auto model_path = dir.path() / "model.mps";
  const auto sol_path = dir.path() / "model.sol";
  const auto log_path = dir.path() / "solver.log";
  write_mps(model, model_path);
  replace_all(cmd, "{model}", model_path.string());
  replace_all(cmd, "{solution}", sol_path.string());

  const pid_t pid = ::fork();
  if (pid < 0) throw SpawnError("fork failed for: " + cmd + ": " + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    const std::string redirected = "exec >" + log_path.string() + " 2>&1; " + cmd;
    ::execl("/bin/sh", "sh", "-c", redirected.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  int wstatus = 0;
  bool timed_out = false;
  for (;;) {
    const pid_t r = ::waitpid(pid, &wstatus, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) throw SpawnError("waitpid failed for: " + cmd);
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (config.timeout_seconds > 0.0 && elapsed > config.timeout_seconds) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &wstatus, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }

  Solution sol;
  sol.source = SolutionSource::External;
  if (timed_out) {
    sol.status = PlanStatus::Unknown;
    sol.warnings.push_back("solver timed out after " + std::to_string(config.timeout_seconds) +
                           " s; partial output ignored");
    return sol;
  }
  const int code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : 128 + WTERMSIG(wstatus);
  if (code == 127) throw SpawnError("could not run: " + cmd + "\n" + tail_of(log_path));

  const auto mapped = config.exit_codes.find(code);
  std::error_code ec;
  const bool have_file = std::filesystem::exists(sol_path, ec) &&
                         std::filesystem::file_size(sol_path, ec) > 0;
  if (!have_file) {
    sol.status = mapped != config.exit_codes.end() ? mapped->second : PlanStatus::Unknown;
    sol.warnings.push_back("solver exited with code " + std::to_string(code) +
                           " and wrote no solution");
    return sol;
  }
  Solution parsed = load_solution(sol_path, &model.vars);
  parsed.source = SolutionSource::External;
  parsed.status = mapped != config.exit_codes.end() ? mapped->second
                  : code == 0                       ? PlanStatus::Optimal
                                                    : PlanStatus::Feasible;
  return parsed;
}

}  // namespace emdarp
