// report.hpp — stable JSON and human-readable text renderings of the
// analysis findings.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ivdiff/consolidate.hpp"

namespace ivdiff {

struct Report {
  std::string tool_version;
  std::map<std::string, std::string> config;  // echo of the effective configuration
  std::vector<VersionInvariant> version_invariants;
  std::vector<InvariantChurn> invariant_churns;
  std::vector<std::string> diagnostics;
  std::map<std::string, long long> timing_ms;

  // Canonical ordering; renderers expect it.
  void sort();
};

// Deterministic, byte-stable for identical reports (sorted keys and
// sequences).
std::string render_json(const Report& r);

// One finding per line (UTF-8 arrows):
//   VI @exit [1,2,3]: c = 2
//   IC @exit v2→v3: -{b = 3} +{b = 4} code:+[L6,L9] shared:[L1↔L1,L3↔L3]
std::string render_text(const Report& r);

// Rebuilds a report's semantic content from render_json output.
Report parse_json(const std::string& text);

}  // namespace ivdiff
