// driver.hpp — end-to-end pipeline behind the command line: parse versions,
// diff, build the multiversion graph, run the analysis (and optionally the
// oracle cross-check), consolidate, render.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ivdiff/report.hpp"

namespace ivdiff {

inline constexpr const char* kToolVersion = "ivdiff 0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitOracleMismatch = 4;

struct DriverOptions {
  std::vector<std::string> version_files;
  std::vector<std::string> points = {"exit"};
  std::vector<int> versions;  // versions of interest; empty means all
  // Template families; default follows the tool's standard configuration.
  bool tmpl_const = true;
  bool tmpl_linear = true;
  int linear_max_arity = 2;
  std::vector<std::string> ineq;  // explicit candidates, e.g. "b>a1"
  bool ineq_all = false;
  std::string ineq_rels = ">";  // relations used by --ineq-all
  bool allow_ne = false;
  std::vector<std::string> vars;
  std::vector<std::pair<int, int>> pairs;  // churn pairs; empty = consecutive
  long long budget = 1'000'000;
  int path_budget = 4096;
  std::string format = "text";  // "text" | "json"
  std::string out_path;         // empty = stdout
  bool trace = false;
  std::string trace_path;  // with --trace: write to file instead of stderr
  bool oracle = false;
  bool timings = false;
  std::string emit_cfg_prefix;
  std::string emit_mvicfg_path;
  std::string emit_diff_prefix;
  std::vector<std::string> use_diff_files;
};

// Runs the pipeline; findings go to `out`, traces and errors to `err`.
// Returns one of the exit codes above.
int run_driver(const DriverOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ivdiff
