#include "ivdiff/engine.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <sstream>

namespace ivdiff {

std::string TemplateInstance::id() const {
  switch (kind) {
    case TemplateKind::Const:
      return target + " = ?";
    case TemplateKind::Ineq:
      return target + " " + render_rel(rel) + " " + rhs_vars[0];
    case TemplateKind::Linear: {
      std::string s = target + " = ";
      for (size_t i = 0; i < rhs_vars.size(); ++i) {
        if (i) s += " + ";
        s += "?*" + rhs_vars[i];
      }
      return s;
    }
  }
  return "";
}

std::vector<TemplateInstance> instantiate_templates(const EngineConfig& config,
                                                    std::span<const std::string> vars) {
  std::vector<TemplateInstance> out;
  if (config.tmpl_const) {
    for (const auto& v : vars)
      out.push_back(TemplateInstance{TemplateKind::Const, v, Rel::Eq, {}});
  }
  for (const auto& spec : config.ineq_explicit) {
    out.push_back(TemplateInstance{TemplateKind::Ineq, spec.lhs, spec.rel, {spec.rhs}});
  }
  if (config.ineq_all) {
    for (const auto& x : vars) {
      for (const auto& y : vars) {
        if (x == y) continue;
        for (Rel r : config.ineq_rels) {
          if (r == Rel::Ne && !config.allow_ne) continue;
          out.push_back(TemplateInstance{TemplateKind::Ineq, x, r, {y}});
        }
      }
    }
  }
  if (config.tmpl_linear) {
    for (const auto& y : vars) {
      if (config.linear_max_arity >= 1) {
        for (const auto& x : vars) {
          if (x == y) continue;
          out.push_back(TemplateInstance{TemplateKind::Linear, y, Rel::Eq, {x}});
        }
      }
      if (config.linear_max_arity >= 2) {
        for (size_t i = 0; i < vars.size(); ++i) {
          for (size_t j = i + 1; j < vars.size(); ++j) {
            if (vars[i] == y || vars[j] == y) continue;
            out.push_back(TemplateInstance{TemplateKind::Linear, y, Rel::Eq, {vars[i], vars[j]}});
          }
        }
      }
    }
  }
  return out;
}

namespace {

// Symbolic value of a source expression; nullopt on division by a
// non-constant or zero divisor.
std::optional<SymExpr> eval_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      return SymExpr::constant(e.value);
    case Expr::Kind::Var:
      return SymExpr::variable(e.name);
    case Expr::Kind::Unary: {
      auto k = eval_expr(e.kids[0]);
      if (!k) return std::nullopt;
      return -*k;
    }
    case Expr::Kind::Binary: {
      auto l = eval_expr(e.kids[0]);
      auto r = eval_expr(e.kids[1]);
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

struct PathAlt {
  std::vector<SymCond> conds;
  bool unknown_feasibility = false;

  friend bool operator==(const PathAlt&, const PathAlt&) = default;
};

struct Query {
  int qid = 0;
  VersionSet versions;
  NodeId at = 0;
  SymExpr lhs;
  SymExpr rhs;  // Ineq: tracked rhs; Linear: parameterized sum; Const: unused
  bool poisoned = false;
  std::vector<PathAlt> alts{PathAlt{}};
  std::vector<std::pair<NodeId, VersionSet>> contrib;

  std::string candidate_render(const TemplateInstance& t) const {
    switch (t.kind) {
      case TemplateKind::Const:
        return t.target + " = " + lhs.render();
      case TemplateKind::Ineq:
        return lhs.render() + " " + render_rel(t.rel) + " " + rhs.render();
      case TemplateKind::Linear:
        return lhs.render() + " = " + rhs.render();
    }
    return "";
  }

  std::string state_key(const TemplateInstance& t) const {
    std::string key = lhs.render() + "|" + rhs.render();
    if (poisoned) key += "|poisoned";
    if (t.kind == TemplateKind::Ineq) {
      key += "|[";
      for (const auto& c : alts[0].conds) key += c.render() + ";";
      if (alts[0].unknown_feasibility) key += "?";
      key += "]";
    }
    return key;
  }
};

class Engine {
 public:
  Engine(const Mvicfg& g, const EngineConfig& config) : g_(g), config_(config) {}

  AnalysisResult run() {
    raise_all();
    while (!buckets_.empty()) {
      auto it = buckets_.begin();
      BucketKey key = it->first;
      std::vector<Query> instances = std::move(it->second);
      buckets_.erase(it);
      process_bucket(std::get<1>(key), std::get<2>(key), std::move(instances));
    }
    std::sort(result_.diagnostics.begin(), result_.diagnostics.end());
    result_.diagnostics.erase(
        std::unique(result_.diagnostics.begin(), result_.diagnostics.end()),
        result_.diagnostics.end());
    return std::move(result_);
  }

 private:
  using BucketKey = std::tuple<int, NodeId, int>;  // (-topo_rank, node, qid)

  const Mvicfg& g_;
  const EngineConfig& config_;
  AnalysisResult result_;
  std::map<BucketKey, std::vector<Query>> buckets_;
  std::map<int, VersionSet> conflicted_;  // qid -> versions with a settled conflict
  std::set<std::pair<NodeId, int>> processed_;

  void trace(const std::string& line) {
    if (config_.trace) *config_.trace << line << "\n";
  }

  const TemplateInstance& tmpl(int qid) const { return result_.queries[qid].tmpl; }

  void diagnostic(std::string d) { result_.diagnostics.push_back(std::move(d)); }

  void raise_all() {
    result_.queries = enumerate_queries(g_, config_);
    for (int qid = 0; qid < static_cast<int>(result_.queries.size()); ++qid) {
      const QueryInfo& info = result_.queries[qid];
      const TemplateInstance& t = info.tmpl;
      result_.entries.emplace_back();
      result_.visited.emplace_back();
      Query q;
      q.qid = qid;
      q.versions = config_.versions;
      q.at = info.point_node;
      q.lhs = SymExpr::variable(t.target);
      if (t.kind == TemplateKind::Ineq) {
        q.rhs = SymExpr::variable(t.rhs_vars[0]);
      } else if (t.kind == TemplateKind::Linear) {
        for (size_t i = 0; i < t.rhs_vars.size(); ++i)
          q.rhs += SymExpr::param(static_cast<int>(i + 1)) * SymExpr::variable(t.rhs_vars[i]);
      }
      trace("raise q=" + std::to_string(qid) + " point=" + info.point_name + " versions=" +
            q.versions.render() + " cand=\"" + t.id() + "\"");
      // The invariant at a point describes the state after the point's own
      // statement, so the raise node's transfer applies immediately.
      apply_transfer(q, info.point_node, BranchLabel::None);
      push(std::move(q));
    }
  }

  void push(Query q) {
    if (q.versions.empty()) return;
    BucketKey key{-g_.topo_rank[q.at], q.at, q.qid};
    buckets_[key].push_back(std::move(q));
  }

  void process_bucket(NodeId node, int qid, std::vector<Query> instances) {
    bool fresh = processed_.insert({node, qid}).second;
    assert(fresh && "node processed twice for a query");
    static_cast<void>(fresh);
    // Strip versions settled by conflicts elsewhere.
    VersionSet dead = conflicted_.count(qid) ? conflicted_[qid] : VersionSet{};
    std::map<std::string, Query> merged;
    for (auto& q : instances) {
      VersionSet pruned = q.versions - dead;
      if (pruned != q.versions) {
        trace("purge q=" + std::to_string(qid) + " node=" + std::to_string(node) + " versions=" +
              (q.versions - pruned).render());
        q.versions = pruned;
      }
      if (q.versions.empty()) continue;
      std::string key = q.state_key(tmpl(qid));
      auto it = merged.find(key);
      if (it == merged.end()) {
        merged.emplace(std::move(key), std::move(q));
      } else {
        Query& into = it->second;
        trace("merge q=" + std::to_string(qid) + " node=" + std::to_string(node) + " versions=" +
              q.versions.render() + " cand=\"" + q.candidate_render(tmpl(qid)) + "\"");
        into.versions = into.versions | q.versions;
        for (auto& alt : q.alts)
          if (!std::count(into.alts.begin(), into.alts.end(), alt)) into.alts.push_back(alt);
        into.contrib.insert(into.contrib.end(), q.contrib.begin(), q.contrib.end());
      }
    }
    for (auto& [key, q] : merged) {
      if (!try_resolve(q)) propagate(q);
    }
  }

  void propagate(const Query& q) {
    VersionSet dead = conflicted_.count(q.qid) ? conflicted_[q.qid] : VersionSet{};
    for (const PredEdge& pe : preds(g_, q.at, q.versions)) {
      VersionSet inter = pe.versions - dead;
      if (inter.empty()) continue;
      Query clone = q;
      clone.versions = inter;
      clone.at = pe.pred;
      apply_transfer(clone, pe.pred, pe.label);
      push(std::move(clone));
    }
  }

  void apply_transfer(Query& q, NodeId node_id, BranchLabel label) {
    if (++result_.transfers > config_.budget)
      throw BudgetExceeded("analysis budget exceeded while processing query '" +
                           tmpl(q.qid).id() + "' at node " + std::to_string(node_id));
    if (config_.instrument) {
      std::string key = std::to_string(q.qid) + "|" + std::to_string(node_id) + "|" +
                        render_branch_label(label) + "|" + q.state_key(tmpl(q.qid));
      ++result_.transfer_counter[key];
    }
    result_.visited[q.qid].insert(node_id);
    const MvNode& node = g_.node(node_id);
    bool changed = false;
    switch (node.kind) {
      case CfgNode::Kind::Entry:
      case CfgNode::Kind::Exit:
        break;
      case CfgNode::Kind::Statement: {
        std::optional<SymExpr> repl;
        if (node.stmt_kind == Stmt::Kind::Input) {
          repl = SymExpr::input(g_.input_symbol[node_id]);
        } else {
          repl = eval_expr(node.value);
        }
        const std::string& var = node.target;
        bool in_candidate =
            !q.poisoned && (q.lhs.contains_var(var) || q.rhs.contains_var(var));
        if (in_candidate) {
          if (!repl) {
            q.poisoned = true;
            diagnostic("non-polynomial assignment at " + describe(node) +
                       " blocks query '" + tmpl(q.qid).id() + "'");
            changed = true;
          } else {
            auto [l, cl] = q.lhs.substitute(var, *repl);
            auto [r, cr] = q.rhs.substitute(var, *repl);
            q.lhs = std::move(l);
            q.rhs = std::move(r);
            changed = cl || cr;
          }
        }
        for (auto& alt : q.alts) {
          for (size_t i = 0; i < alt.conds.size();) {
            SymCond& c = alt.conds[i];
            if (!c.lhs.contains_var(var) && !c.rhs.contains_var(var)) {
              ++i;
              continue;
            }
            if (!repl) {
              alt.conds.erase(alt.conds.begin() + i);
              alt.unknown_feasibility = true;
              diagnostic("non-polynomial assignment at " + describe(node) +
                         " weakens path feasibility tracking");
            } else {
              c = c.substitute(var, *repl).first;
              ++i;
            }
          }
        }
        break;
      }
      case CfgNode::Kind::Branch: {
        if (label == BranchLabel::None) break;  // raising at a branch point
        auto l = eval_expr(node.cond->lhs);
        auto r = eval_expr(node.cond->rhs);
        if (!l || !r) {
          for (auto& alt : q.alts) alt.unknown_feasibility = true;
          diagnostic("non-polynomial condition at " + describe(node) +
                     " weakens path feasibility tracking");
          break;
        }
        Rel rel = label == BranchLabel::True ? node.cond->rel : negate_rel(node.cond->rel);
        SymCond cond{*l, rel, *r};
        for (auto& alt : q.alts) alt.conds.push_back(cond);
        break;
      }
    }
    if (changed) q.contrib.emplace_back(node_id, q.versions);
    trace("transfer q=" + std::to_string(q.qid) + " node=" + std::to_string(node_id) + " \"" +
          node.render() + "\" versions=" + q.versions.render() + " cand=\"" +
          q.candidate_render(tmpl(q.qid)) + "\"");
  }

  std::string describe(const MvNode& node) const {
    std::ostringstream os;
    os << "node " << node.id << " (" << node.render() << ")";
    return os.str();
  }

  bool at_entry(const Query& q) const { return q.at == g_.entry; }

  bool conds_var_free(const Query& q) const {
    for (const auto& alt : q.alts)
      for (const auto& c : alt.conds)
        if (c.has_var_atoms()) return false;
    return true;
  }

  // Nothing upstream can change the verdict anymore: either we are at entry,
  // or every remaining backward path is branch-free and the constraints no
  // longer mention program variables.
  bool finalizable(const Query& q) const {
    if (at_entry(q)) return true;
    if (!g_.branch_free_above[q.at].contains_all(q.versions)) return false;
    return conds_var_free(q);
  }

  // Drops alternatives with unsatisfiable path constraints. False when every
  // alternative is infeasible (the instance covers no realizable path).
  bool filter_feasible(Query& q) {
    std::vector<PathAlt> keep;
    for (auto& alt : q.alts) {
      if (alt.unknown_feasibility || lin_sat(alt.conds) != SatResult::Unsat)
        keep.push_back(std::move(alt));
    }
    if (keep.empty()) {
      trace("vacuous q=" + std::to_string(q.qid) + " node=" + std::to_string(q.at) +
            " versions=" + q.versions.render());
      return false;
    }
    q.alts = std::move(keep);
    return true;
  }

  // True when the query is settled at its current node (resolved, vacuous,
  // or fully absorbed); false to keep propagating.
  bool try_resolve(Query& q) {
    const TemplateInstance& t = tmpl(q.qid);
    if (q.poisoned) {
      if (!finalizable(q)) return false;
      if (!filter_feasible(q)) return true;
      record_failure(q, "non-polynomial update");
      return true;
    }
    if (t.kind == TemplateKind::Ineq) return try_resolve_ineq(q);

    bool candidate_final = !q.lhs.has_var_atoms() && !q.rhs.has_var_atoms();
    if (candidate_final) {
      if (!finalizable(q)) return false;
      if (!filter_feasible(q)) return true;
      if (t.kind == TemplateKind::Const) {
        record_value(q, q.lhs);
      } else {
        record_equation(q, ParamEquation{q.lhs, q.rhs});
      }
      return true;
    }
    if (at_entry(q)) {
      diagnostic("uninitialized-use: query '" + t.id() + "' reached entry with unresolved " +
                 "variables in '" + q.candidate_render(t) + "'");
      record_failure(q, "uninitialized use");
      return true;
    }
    return false;
  }

  bool try_resolve_ineq(Query& q) {
    const TemplateInstance& t = tmpl(q.qid);
    PathAlt& alt = q.alts[0];
    if (!alt.unknown_feasibility && lin_sat(alt.conds) == SatResult::Unsat) {
      trace("vacuous q=" + std::to_string(q.qid) + " node=" + std::to_string(q.at) +
            " versions=" + q.versions.render());
      return true;
    }
    SymCond cand{q.lhs, t.rel, q.rhs};
    Verdict verdict = check_valid(cand, alt.conds);
    if (verdict == Verdict::Valid) {
      record_holds(q, /*unverified=*/false);
      return true;
    }
    bool final_here = at_entry(q) || (g_.branch_free_above[q.at].contains_all(q.versions) &&
                                      conds_var_free(q) && !q.lhs.has_var_atoms() &&
                                      !q.rhs.has_var_atoms());
    if (!final_here) return false;
    if (verdict == Verdict::Invalid) {
      record_failure(q, "refuted: " + cand.render());
      return true;
    }
    // Unknown at the final position.
    if (q.lhs.has_var_atoms() || q.rhs.has_var_atoms()) {
      diagnostic("uninitialized-use: query '" + t.id() + "' reached entry with unresolved " +
                 "variables in '" + q.candidate_render(t) + "'");
      record_failure(q, "uninitialized use");
      return true;
    }
    diagnostic("unknown-validity: '" + cand.render() + "' for query '" + t.id() +
               "' accepted without proof (no refutation found)");
    record_holds(q, /*unverified=*/true);
    return true;
  }

  VersionEntry& entry_for(int qid, int version) { return result_.entries[qid][version]; }

  void add_contrib(const Query& q, int version, VersionEntry& e) {
    for (const auto& [node, vs] : q.contrib)
      if (vs.contains(version)) e.contrib.insert(node);
  }

  void settle_conflict(const Query& q, int version, VersionEntry& e, const std::string& why) {
    e.conflicted = true;
    e.const_value.reset();
    e.equations.clear();
    e.holds = 0;
    conflicted_[q.qid].add(version);
    trace("conflict q=" + std::to_string(q.qid) + " version=" + std::to_string(version) + " " +
          why);
  }

  void record_value(const Query& q, const SymExpr& value) {
    for (int v : q.versions.members()) {
      VersionEntry& e = entry_for(q.qid, v);
      add_contrib(q, v, e);
      if (e.conflicted) continue;
      if (!e.const_value) {
        e.const_value = value;
        trace("resolve q=" + std::to_string(q.qid) + " node=" + std::to_string(q.at) +
              " version=" + std::to_string(v) + " yes \"" + tmpl(q.qid).target + " = " +
              value.render() + "\"");
      } else if (!(*e.const_value == value)) {
        settle_conflict(q, v, e,
                        "\"" + e.const_value->render() + "\" vs \"" + value.render() + "\"");
      }
    }
  }

  void record_equation(const Query& q, const ParamEquation& eq) {
    for (int v : q.versions.members()) {
      VersionEntry& e = entry_for(q.qid, v);
      add_contrib(q, v, e);
      if (e.conflicted) continue;
      e.equations.push_back(eq);
      if (!solve_params(e.equations)) {
        settle_conflict(q, v, e, "parameter equations inconsistent");
      } else {
        trace("resolve q=" + std::to_string(q.qid) + " node=" + std::to_string(q.at) +
              " version=" + std::to_string(v) + " yes equation \"" + eq.concrete.render() +
              " = " + eq.rhs.render() + "\"");
      }
    }
  }

  void record_holds(const Query& q, bool unverified) {
    for (int v : q.versions.members()) {
      VersionEntry& e = entry_for(q.qid, v);
      add_contrib(q, v, e);
      if (e.conflicted) continue;
      ++e.holds;
      e.unverified |= unverified;
      trace("resolve q=" + std::to_string(q.qid) + " node=" + std::to_string(q.at) +
            " version=" + std::to_string(v) + (unverified ? " yes (unverified)" : " yes"));
    }
  }

  void record_failure(const Query& q, const std::string& why) {
    for (int v : q.versions.members()) {
      VersionEntry& e = entry_for(q.qid, v);
      add_contrib(q, v, e);
      if (e.conflicted) continue;
      settle_conflict(q, v, e, why);
    }
  }
};

}  // namespace

std::vector<QueryInfo> enumerate_queries(const Mvicfg& g, const EngineConfig& config) {
  std::vector<QueryInfo> out;
  std::vector<std::string> seen_points;
  for (const auto& point : config.points) {
    if (std::count(seen_points.begin(), seen_points.end(), point)) continue;
    seen_points.push_back(point);
    auto node = g.find_point(point);
    if (!node) throw UnknownPoint("unknown program point '" + point + "'");
    if (!g.node(*node).versions.contains_all(config.versions))
      throw NotMatchedPoint("point '" + point + "' is not matched over versions " +
                            config.versions.render());
    std::vector<std::string> vars = get_vars(g, *node, config.versions);
    if (!config.var_filter.empty()) {
      std::vector<std::string> filtered;
      for (const auto& v : vars)
        if (std::count(config.var_filter.begin(), config.var_filter.end(), v))
          filtered.push_back(v);
      vars = std::move(filtered);
    }
    for (auto& t : instantiate_templates(config, vars))
      out.push_back(QueryInfo{point, *node, std::move(t)});
  }
  return out;
}

std::optional<ResolvedInvariant> AnalysisResult::invariant(int query, int version) const {
  auto it = entries[query].find(version);
  if (it == entries[query].end()) return std::nullopt;
  const VersionEntry& e = it->second;
  if (e.conflicted) return std::nullopt;
  const TemplateInstance& t = queries[query].tmpl;
  switch (t.kind) {
    case TemplateKind::Const:
      if (!e.const_value) return std::nullopt;
      return ResolvedInvariant{t.target + " = " + e.const_value->render(), false};
    case TemplateKind::Linear: {
      if (e.equations.empty()) return std::nullopt;
      auto sol = solve_params(e.equations);
      if (!sol) return std::nullopt;
      SymExpr rhs;
      for (size_t i = 0; i < t.rhs_vars.size(); ++i) {
        auto itp = sol->find(static_cast<int>(i + 1));
        Rat c = itp == sol->end() ? Rat(0) : itp->second;
        rhs += SymExpr::constant(c) * SymExpr::variable(t.rhs_vars[i]);
      }
      return ResolvedInvariant{t.target + " = " + rhs.render(), false};
    }
    case TemplateKind::Ineq:
      if (e.holds <= 0) return std::nullopt;
      return ResolvedInvariant{t.target + " " + render_rel(t.rel) + " " + t.rhs_vars[0],
                               e.unverified};
  }
  return std::nullopt;
}

AnalysisResult run(const Mvicfg& g, const EngineConfig& config) {
  if (config.versions.empty())
    throw std::invalid_argument("versions of interest must be nonempty");
  if (!VersionSet::all(g.n_versions).contains_all(config.versions))
    throw std::invalid_argument("versions of interest exceed the provided versions");
  Engine engine(g, config);
  return engine.run();
}

}  // namespace ivdiff
