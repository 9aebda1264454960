#include "ivdiff/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ivdiff {

namespace {

std::optional<SymExpr> lookup(const std::map<std::string, std::optional<SymExpr>>& store,
                              const std::string& var) {
  auto it = store.find(var);
  if (it == store.end()) return SymExpr::variable(var);
  return it->second;
}

std::optional<SymExpr> eval_forward(const Expr& e,
                                    const std::map<std::string, std::optional<SymExpr>>& store) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      return SymExpr::constant(e.value);
    case Expr::Kind::Var:
      return lookup(store, e.name);
    case Expr::Kind::Unary: {
      auto k = eval_forward(e.kids[0], store);
      if (!k) return std::nullopt;
      return -*k;
    }
    case Expr::Kind::Binary: {
      auto l = eval_forward(e.kids[0], store);
      auto r = eval_forward(e.kids[1], store);
      if (!l || !r) return std::nullopt;
      switch (e.op) {
        case '+':
          return *l + *r;
        case '-':
          return *l - *r;
        case '*':
          return *l * *r;
        case '/':
          return l->divide(*r);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// Executes a node sequence forward; the sequence must follow version edges.
PathResult execute_path(const Mvicfg& g, int version, const std::vector<NodeId>& path) {
  PathResult r;
  r.version = version;
  r.path = path;
  for (size_t i = 0; i < path.size(); ++i) {
    const MvNode& node = g.node(path[i]);
    switch (node.kind) {
      case CfgNode::Kind::Entry:
      case CfgNode::Kind::Exit:
        break;
      case CfgNode::Kind::Statement:
        if (node.stmt_kind == Stmt::Kind::Input) {
          r.store[node.target] = SymExpr::input(g.input_symbol[node.id]);
        } else {
          r.store[node.target] = eval_forward(node.value, r.store);
        }
        break;
      case CfgNode::Kind::Branch: {
        if (i + 1 >= path.size()) break;
        // Polarity comes from the edge taken to the next node.
        BranchLabel label = BranchLabel::None;
        for (int ei : g.succ_edges[node.id]) {
          const MvEdge& e = g.edges[ei];
          if (e.to == path[i + 1] && e.versions.contains(version)) {
            label = e.label;
            break;
          }
        }
        auto l = eval_forward(node.cond->lhs, r.store);
        auto rr = eval_forward(node.cond->rhs, r.store);
        if (!l || !rr) {
          r.unknown_feasibility = true;
          break;
        }
        Rel rel = label == BranchLabel::True ? node.cond->rel : negate_rel(node.cond->rel);
        r.conditions.push_back(SymCond{*l, rel, *rr});
        break;
      }
    }
  }
  return r;
}

// DFS over the version-restricted graph from entry; emits node sequences
// ending at `stop_at` (every visit of it) or at exit.
void collect_paths(const Mvicfg& g, int version, NodeId stop_at, std::vector<NodeId>& cur,
                   std::vector<std::vector<NodeId>>& out, int budget) {
  NodeId n = cur.back();
  if (n == stop_at) {
    if (static_cast<int>(out.size()) >= budget)
      throw PathBudgetExceeded("path enumeration budget (" + std::to_string(budget) +
                               ") exceeded for version " + std::to_string(version));
    out.push_back(cur);
    return;
  }
  std::vector<std::pair<std::pair<int, NodeId>, NodeId>> outs;
  for (int ei : g.succ_edges[n]) {
    const MvEdge& e = g.edges[ei];
    if (e.versions.contains(version))
      outs.push_back({{static_cast<int>(e.label), e.to}, e.to});
  }
  std::sort(outs.begin(), outs.end());
  for (auto& [key, to] : outs) {
    cur.push_back(to);
    collect_paths(g, version, stop_at, cur, out, budget);
    cur.pop_back();
  }
}

std::vector<std::vector<NodeId>> paths_to(const Mvicfg& g, int version, NodeId stop_at,
                                          int budget) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> cur{g.entry};
  collect_paths(g, version, stop_at, cur, out, budget);
  return out;
}

}  // namespace

std::vector<PathResult> enumerate_paths(const Mvicfg& g, int version, int path_budget) {
  std::vector<PathResult> results;
  for (auto& p : paths_to(g, version, g.exit, path_budget))
    results.push_back(execute_path(g, version, p));
  return results;
}

namespace {

struct PrefixState {
  std::map<std::string, std::optional<SymExpr>> store;
  std::vector<SymCond> conditions;
  bool unknown_feasibility = false;
};

// Per-version invariant of one template over the executed prefixes,
// definition-style: the candidate must come out the same on every feasible
// prefix reaching the point.
std::optional<ResolvedInvariant> derive(const TemplateInstance& t,
                                        const std::vector<PrefixState>& prefixes,
                                        std::vector<std::string>& diagnostics) {
  bool failed = false;
  std::optional<SymExpr> common_value;
  std::vector<ParamEquation> equations;
  int holds = 0;
  bool unverified = false;

  for (const auto& p : prefixes) {
    if (!p.unknown_feasibility && lin_sat(p.conditions) == SatResult::Unsat) continue;
    switch (t.kind) {
      case TemplateKind::Const: {
        auto val = lookup(p.store, t.target);
        if (!val || val->has_var_atoms()) {
          failed = true;
          break;
        }
        if (!common_value) {
          common_value = *val;
        } else if (!(*common_value == *val)) {
          failed = true;
        }
        break;
      }
      case TemplateKind::Linear: {
        auto y = lookup(p.store, t.target);
        if (!y || y->has_var_atoms()) {
          failed = true;
          break;
        }
        SymExpr rhs;
        bool ok = true;
        for (size_t i = 0; i < t.rhs_vars.size(); ++i) {
          auto x = lookup(p.store, t.rhs_vars[i]);
          if (!x || x->has_var_atoms()) {
            ok = false;
            break;
          }
          rhs += SymExpr::param(static_cast<int>(i + 1)) * *x;
        }
        if (!ok) {
          failed = true;
          break;
        }
        equations.push_back(ParamEquation{*y, rhs});
        break;
      }
      case TemplateKind::Ineq: {
        auto l = lookup(p.store, t.target);
        auto r = lookup(p.store, t.rhs_vars[0]);
        if (!l || !r) {
          failed = true;
          break;
        }
        SymCond cand{*l, t.rel, *r};
        Verdict v = check_valid(cand, p.conditions);
        if (v == Verdict::Invalid) {
          failed = true;
        } else if (v == Verdict::Valid) {
          ++holds;
        } else if (cand.has_var_atoms()) {
          failed = true;
        } else {
          ++holds;
          unverified = true;
          diagnostics.push_back("unknown-validity: '" + cand.render() + "' for query '" +
                                t.id() + "' accepted without proof (no refutation found)");
        }
        break;
      }
    }
    if (failed) break;
  }
  if (failed) return std::nullopt;
  switch (t.kind) {
    case TemplateKind::Const:
      if (!common_value) return std::nullopt;
      return ResolvedInvariant{t.target + " = " + common_value->render(), false};
    case TemplateKind::Linear: {
      if (equations.empty()) return std::nullopt;
      auto sol = solve_params(equations);
      if (!sol) return std::nullopt;
      SymExpr rhs;
      for (size_t i = 0; i < t.rhs_vars.size(); ++i) {
        auto it = sol->find(static_cast<int>(i + 1));
        Rat c = it == sol->end() ? Rat(0) : it->second;
        rhs += SymExpr::constant(c) * SymExpr::variable(t.rhs_vars[i]);
      }
      return ResolvedInvariant{t.target + " = " + rhs.render(), false};
    }
    case TemplateKind::Ineq:
      if (holds == 0) return std::nullopt;
      return ResolvedInvariant{t.target + " " + render_rel(t.rel) + " " + t.rhs_vars[0],
                               unverified};
  }
  return std::nullopt;
}

}  // namespace

OracleResult oracle_run(const Mvicfg& g, const EngineConfig& config, int path_budget) {
  OracleResult result;
  result.queries = enumerate_queries(g, config);
  result.per_version.resize(result.queries.size());

  // Prefix states per (point node, version), computed once per pair.
  std::map<std::pair<NodeId, int>, std::vector<PrefixState>> prefix_cache;
  auto prefixes_for = [&](NodeId point, int version) -> const std::vector<PrefixState>& {
    auto key = std::make_pair(point, version);
    auto it = prefix_cache.find(key);
    if (it != prefix_cache.end()) return it->second;
    std::vector<PrefixState> states;
    for (auto& p : paths_to(g, version, point, path_budget)) {
      PathResult r = execute_path(g, version, p);
      states.push_back(PrefixState{std::move(r.store), std::move(r.conditions),
                                   r.unknown_feasibility});
    }
    return prefix_cache.emplace(key, std::move(states)).first->second;
  };

  for (size_t qi = 0; qi < result.queries.size(); ++qi) {
    const QueryInfo& info = result.queries[qi];
    for (int v : config.versions.members()) {
      result.per_version[qi][v] =
          derive(info.tmpl, prefixes_for(info.point_node, v), result.diagnostics);
    }
  }
  std::sort(result.diagnostics.begin(), result.diagnostics.end());
  result.diagnostics.erase(std::unique(result.diagnostics.begin(), result.diagnostics.end()),
                           result.diagnostics.end());
  return result;
}

std::vector<std::string> compare_engine_oracle(const AnalysisResult& engine,
                                               const OracleResult& oracle) {
  std::vector<std::string> mismatches;
  if (engine.queries.size() != oracle.queries.size()) {
    mismatches.push_back("query sets differ in size");
    return mismatches;
  }
  for (size_t qi = 0; qi < engine.queries.size(); ++qi) {
    for (const auto& [version, oracle_inv] : oracle.per_version[qi]) {
      auto engine_inv = engine.invariant(static_cast<int>(qi), version);
      std::string label = "query '" + engine.queries[qi].tmpl.id() + "' at " +
                          engine.queries[qi].point_name + ", version " + std::to_string(version);
      if (engine_inv.has_value() != oracle_inv.has_value()) {
        std::ostringstream os;
        os << label << ": engine "
           << (engine_inv ? "'" + engine_inv->text + "'" : std::string("(none)")) << " vs oracle "
           << (oracle_inv ? "'" + oracle_inv->text + "'" : std::string("(none)"));
        mismatches.push_back(os.str());
      } else if (engine_inv && engine_inv->text != oracle_inv->text) {
        mismatches.push_back(label + ": engine '" + engine_inv->text + "' vs oracle '" +
                             oracle_inv->text + "'");
      }
    }
  }
  return mismatches;
}

}  // namespace ivdiff
