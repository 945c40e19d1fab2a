// SPDX-License-Identifier: Apache-2.0
#include "netlift/sat/subprocess.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace netlift::sat {

namespace {

std::string fresh_path(const char* suffix) {
  static std::atomic<uint64_t> counter{0};
  std::ostringstream name;
  name << "netlift-" << ::getpid() << '-' << counter++ << suffix;
  return (std::filesystem::temp_directory_path() / name.str()).string();
}

}  // namespace

dimacs_result solve_via_command(const std::string& command, int n_vars,
                                const std::vector<std::vector<lit>>& clauses,
                                const std::vector<lit>& assumptions, solve_limits limits) {
  std::string cnf_path = fresh_path(".cnf");
  std::string out_path = fresh_path(".out");
  {
    std::ofstream f(cnf_path);
    if (!f) throw std::runtime_error("cannot write temporary CNF: " + cnf_path);
    std::vector<std::vector<lit>> all = clauses;
    for (lit a : assumptions) all.push_back({a});
    write_dimacs(f, n_vars, all);
  }

  std::string prefix;
  if (limits.deadline != std::chrono::steady_clock::time_point::max()) {
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        limits.deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      std::filesystem::remove(cnf_path);
      std::filesystem::remove(out_path);
      return {solve_status::unknown, {}};
    }
    std::ostringstream t;
    t << "timeout " << (remaining.count() / 1000.0) << "s ";
    prefix = t.str();
  }

  std::string cmdline =
      prefix + command + " '" + cnf_path + "' > '" + out_path + "' 2>/dev/null";
  std::system(cmdline.c_str());

  dimacs_result result{solve_status::unknown, {}};
  {
    std::ifstream out(out_path);
    try {
      result = parse_solver_output(out, n_vars);
    } catch (const std::runtime_error&) {
      result.status = solve_status::unknown;  // killed or malformed output
    }
  }
  std::filesystem::remove(cnf_path);
  std::filesystem::remove(out_path);
  return result;
}

}  // namespace netlift::sat
