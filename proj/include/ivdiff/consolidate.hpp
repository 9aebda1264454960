// consolidate.hpp — turns per-version resolved invariants into version
// invariants (identical across all versions of interest) and invariant
// churns (differences between two versions with attributed source lines).
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ivdiff/engine.hpp"
#include "ivdiff/mvicfg.hpp"

namespace ivdiff {

struct VersionInvariant {
  std::string point;
  VersionSet versions;
  std::string invariant;
  std::string query;  // template label the invariant came from
  bool unverified = false;
};

struct InvariantChurn {
  std::string point;
  int from_version = 0;
  int to_version = 0;
  std::string query;
  std::vector<std::string> removed;  // invariant held only in from_version
  std::vector<std::string> added;    // invariant held only in to_version
  std::vector<int> code_removed;     // from-version lines private to it
  std::vector<int> code_added;       // to-version lines private to it
  std::vector<std::pair<int, int>> shared_lines;  // (from-line, to-line) pairs
};

// One version invariant per (point, query) whose resolved invariant exists
// and is identical in every version of V.
std::vector<VersionInvariant> computing_vi(const AnalysisResult& result, VersionSet v);

// One churn per (point, query, pair) whose invariants differ, including
// present-vs-absent; contributing nodes of both sides are classified into
// added/removed/shared source lines.
std::vector<InvariantChurn> computing_ic(const AnalysisResult& result, const Mvicfg& g,
                                         std::span<const std::pair<int, int>> pairs);

}  // namespace ivdiff
