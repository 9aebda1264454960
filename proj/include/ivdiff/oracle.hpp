// oracle.hpp — brute-force reference: enumerate every entry-to-exit path of a
// version (loops are already unrolled, so the graph is acyclic), execute each
// path symbolically, and derive invariants directly from their definition.
// Deliberately exponential; it exists to check the engine.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivdiff/engine.hpp"
#include "ivdiff/mvicfg.hpp"

namespace ivdiff {

struct PathBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PathResult {
  int version = 0;
  std::vector<NodeId> path;
  // Variable values over input symbols; nullopt marks a value ruined by a
  // non-polynomial update. Unassigned variables read as their own atom.
  std::map<std::string, std::optional<SymExpr>> store;
  std::vector<SymCond> conditions;
  bool unknown_feasibility = false;
};

constexpr int kDefaultPathBudget = 4096;

// All entry-to-exit paths of one version, deterministic order.
std::vector<PathResult> enumerate_paths(const Mvicfg& g, int version,
                                        int path_budget = kDefaultPathBudget);

struct OracleResult {
  std::vector<QueryInfo> queries;
  // Aligned with `queries`: per version, the invariant or nothing.
  std::vector<std::map<int, std::optional<ResolvedInvariant>>> per_version;
  std::vector<std::string> diagnostics;
};

// Definition-level invariants for the same query set a configuration raises.
OracleResult oracle_run(const Mvicfg& g, const EngineConfig& config,
                        int path_budget = kDefaultPathBudget);

// Differences between the demand-driven result and the oracle, rendered one
// per line; empty means exact agreement.
std::vector<std::string> compare_engine_oracle(const AnalysisResult& engine,
                                               const OracleResult& oracle);

}  // namespace ivdiff
