// engine.hpp — demand-driven, path-sensitive backward analysis over the
// MVICFG. Queries carry templated invariant candidates; instances are cloned
// along predecessor edges (version sets intersected per edge), merged when
// their symbolic states agree, and resolved into per-version invariants.
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ivdiff/linarith.hpp"
#include "ivdiff/mvicfg.hpp"

namespace ivdiff {

enum class TemplateKind { Const, Ineq, Linear };

struct TemplateInstance {
  TemplateKind kind = TemplateKind::Const;
  std::string target;                 // queried variable (lhs)
  Rel rel = Rel::Eq;                  // Ineq only
  std::vector<std::string> rhs_vars;  // Ineq: one; Linear: one or two

  // Query label used in traces and for correlating churns,
  // e.g. "c = ?", "b > a1", "a = ?*b + ?*c".
  std::string id() const;
};

struct IneqSpec {
  std::string lhs;
  Rel rel = Rel::Gt;
  std::string rhs;
};

struct EngineConfig {
  std::vector<std::string> points = {"exit"};
  VersionSet versions;  // versions of interest; must be nonempty
  bool tmpl_const = true;
  bool tmpl_linear = false;
  int linear_max_arity = 2;
  std::vector<IneqSpec> ineq_explicit;
  bool ineq_all = false;
  std::vector<Rel> ineq_rels = {Rel::Gt};
  bool allow_ne = false;  // gate for `!=` templates
  std::vector<std::string> var_filter;
  long long budget = 1'000'000;
  std::ostream* trace = nullptr;
  bool instrument = false;  // per-(query,node,state) transfer counter
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotMatchedPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per (query, version) record of the invariants-in-progress. The resolved
// payload depends on the template kind; contributing nodes survive conflicts
// so churn attribution can still name the lines involved.
struct VersionEntry {
  bool conflicted = false;
  std::optional<SymExpr> const_value;
  std::vector<ParamEquation> equations;
  int holds = 0;
  bool unverified = false;
  std::set<NodeId> contrib;
};

struct ResolvedInvariant {
  std::string text;
  bool unverified = false;
};

struct QueryInfo {
  std::string point_name;
  NodeId point_node = 0;
  TemplateInstance tmpl;
};

struct AnalysisResult {
  std::vector<QueryInfo> queries;
  std::vector<std::map<int, VersionEntry>> entries;  // per query: version -> entry
  std::vector<std::string> diagnostics;
  long long transfers = 0;
  // With EngineConfig::instrument: count per "query|node|edge-label|state".
  std::map<std::string, int> transfer_counter;
  // Nodes that applied at least one transfer, per query (trace support).
  std::vector<std::set<NodeId>> visited;

  std::optional<ResolvedInvariant> invariant(int query, int version) const;
};

// Template instantiation shared by the engine and the oracle: one candidate
// per variable for the constant template, one per ordered pair and relation
// for inequalities, one per tuple for linear templates.
std::vector<TemplateInstance> instantiate_templates(const EngineConfig& config,
                                                    std::span<const std::string> vars);

// The full query list a configuration raises (points validated against the
// matched-point rule); identical for the engine and the oracle.
std::vector<QueryInfo> enumerate_queries(const Mvicfg& g, const EngineConfig& config);

// Algorithm entry point: raises all configured queries and drains the
// worklist to a fixpoint.
AnalysisResult run(const Mvicfg& g, const EngineConfig& config);

}  // namespace ivdiff
