#include "ivdiff/mvicfg.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>

namespace ivdiff {

std::vector<int> VersionSet::members() const {
  std::vector<int> out;
  for (int v = 1; v <= 64; ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

std::string VersionSet::render() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int v : members()) {
    if (!first) os << ",";
    first = false;
    os << v;
  }
  os << "}";
  return os.str();
}

std::string MvNode::render() const {
  switch (kind) {
    case CfgNode::Kind::Entry:
      return "entry";
    case CfgNode::Kind::Exit:
      return "exit";
    case CfgNode::Kind::Branch:
      return "if (" + cond->render() + ")";
    case CfgNode::Kind::Statement:
      if (stmt_kind == Stmt::Kind::Input) return "input " + target;
      return target + " = " + value.render();
  }
  return "";
}

std::optional<NodeId> Mvicfg::find_point(const std::string& name) const {
  for (const auto& n : nodes)
    if (n.point_names.count(name)) return n.id;
  return std::nullopt;
}

namespace {

// Pairs statements of consecutive versions: a diff line match plus equal
// statement heads plus matching enclosing branches (recursion) unify.
void match_stmt_lists(const std::vector<Stmt>& a, const std::vector<Stmt>& b,
                      const std::map<int, int>& line_match,
                      std::vector<std::pair<const Stmt*, const Stmt*>>& out,
                      std::vector<InconsistentDiff>& bad, int from_version, int to_version) {
  // Index b statements of this level by starting line.
  std::map<int, const Stmt*> b_by_line;
  for (const auto& sb : b) b_by_line[sb.line] = &sb;
  for (const auto& sa : a) {
    auto lm = line_match.find(sa.line);
    if (lm == line_match.end()) continue;
    auto it = b_by_line.find(lm->second);
    if (it == b_by_line.end()) continue;  // matched into a different nesting level
    const Stmt* sb = it->second;
    if (!stmt_head_equal(sa, *sb)) {
      bad.push_back(InconsistentDiff{from_version, to_version, sa.line, sb->line});
      continue;
    }
    out.emplace_back(&sa, sb);
    if (sa.kind == Stmt::Kind::If || sa.kind == Stmt::Kind::While) {
      match_stmt_lists(sa.body, sb->body, line_match, out, bad, from_version, to_version);
      match_stmt_lists(sa.else_body, sb->else_body, line_match, out, bad, from_version,
                       to_version);
    }
  }
}

// Maps each statement/branch CFG node to its starting source line; lines are
// unique per version (the parser enforces one statement per line).
std::map<int, NodeId> nodes_by_line(const Cfg& cfg) {
  std::map<int, NodeId> out;
  for (const auto& n : cfg.nodes)
    if (n.kind == CfgNode::Kind::Statement || n.kind == CfgNode::Kind::Branch) out[n.line] = n.id;
  return out;
}

}  // namespace

Mvicfg build_mvicfg(std::span<const SourceUnit> units, std::span<const Cfg> cfgs,
                    std::span<const EditScript> diffs) {
  assert(units.size() == cfgs.size());
  assert(diffs.size() + 1 == cfgs.size());
  const int n = static_cast<int>(cfgs.size());
  assert(n >= 1 && n <= 64);

  Mvicfg g;
  g.n_versions = n;

  MvNode entry;
  entry.kind = CfgNode::Kind::Entry;
  entry.point_names.insert("entry");
  entry.id = 0;
  g.nodes.push_back(entry);
  g.entry = 0;

  // For each version, per-node mapping into MVICFG ids; filled version by
  // version so matches chain transitively.
  std::vector<std::vector<NodeId>> to_mv(n);
  std::vector<InconsistentDiff> bad;

  for (int vi = 0; vi < n; ++vi) {
    const Cfg& cfg = cfgs[vi];
    to_mv[vi].assign(cfg.nodes.size(), -1);
    to_mv[vi][cfg.entry] = g.entry;

    // Statement pairs against the previous version.
    std::map<NodeId, NodeId> prev_match;  // this version's cfg node -> previous version's
    if (vi > 0) {
      std::map<int, int> line_match;
      for (auto [la, lb] : diffs[vi - 1].matches) line_match[la] = lb;
      std::vector<std::pair<const Stmt*, const Stmt*>> pairs;
      match_stmt_lists(units[vi - 1].stmts, units[vi].stmts, line_match, pairs, bad, vi, vi + 1);
      auto prev_lines = nodes_by_line(cfgs[vi - 1]);
      auto cur_lines = nodes_by_line(cfg);
      for (auto [sa, sb] : pairs) {
        auto pa = prev_lines.find(sa->line);
        auto pb = cur_lines.find(sb->line);
        if (pa != prev_lines.end() && pb != cur_lines.end()) prev_match[pb->second] = pa->second;
      }
    }

    for (const auto& cn : cfg.nodes) {
      if (cn.kind == CfgNode::Kind::Entry || cn.kind == CfgNode::Kind::Exit) continue;
      NodeId mv_id = -1;
      auto pm = prev_match.find(cn.id);
      if (pm != prev_match.end()) mv_id = to_mv[vi - 1][pm->second];
      if (mv_id < 0) {
        MvNode node;
        node.id = static_cast<NodeId>(g.nodes.size());
        node.kind = cn.kind;
        node.stmt_kind = cn.stmt_kind;
        node.target = cn.target;
        node.value = cn.value;
        node.cond = cn.cond;
        g.nodes.push_back(std::move(node));
        mv_id = g.nodes.back().id;
      }
      MvNode& node = g.nodes[mv_id];
      node.versions.add(vi + 1);
      node.line_per_version[vi + 1] = cn.line;
      node.point_names.insert(cn.point_names.begin(), cn.point_names.end());
      to_mv[vi][cn.id] = mv_id;
    }
  }

  MvNode exit_node;
  exit_node.kind = CfgNode::Kind::Exit;
  exit_node.point_names.insert("exit");
  exit_node.id = static_cast<NodeId>(g.nodes.size());
  g.nodes.push_back(exit_node);
  g.exit = g.nodes.back().id;

  for (int vi = 0; vi < n; ++vi) {
    to_mv[vi][cfgs[vi].exit] = g.exit;
    g.nodes[g.entry].versions.add(vi + 1);
    g.nodes[g.exit].versions.add(vi + 1);
  }

  // Edges: union of per-version successor relations.
  std::map<std::tuple<NodeId, NodeId, int>, VersionSet> edge_map;
  for (int vi = 0; vi < n; ++vi) {
    for (const auto& e : cfgs[vi].edges) {
      NodeId f = to_mv[vi][e.from];
      NodeId t = to_mv[vi][e.to];
      edge_map[{f, t, static_cast<int>(e.label)}].add(vi + 1);
    }
  }
  for (const auto& [key, versions] : edge_map) {
    auto [f, t, l] = key;
    g.edges.push_back(MvEdge{f, t, static_cast<BranchLabel>(l), versions});
  }

  for (const auto& d : bad) {
    g.diagnostics.push_back("inconsistent diff: line " + std::to_string(d.from_line) +
                            " of version " + std::to_string(d.from_version) + " matches line " +
                            std::to_string(d.to_line) + " of version " +
                            std::to_string(d.to_version) +
                            " but the statements differ; treated as unmatched");
  }
  for (int vi = 0; vi < n; ++vi)
    for (const auto& d : cfgs[vi].diagnostics)
      g.diagnostics.push_back("version " + std::to_string(vi + 1) + ": " + d);

  // Indexes.
  const size_t nn = g.nodes.size();
  g.pred_edges.assign(nn, {});
  g.succ_edges.assign(nn, {});
  for (size_t i = 0; i < g.edges.size(); ++i) {
    g.pred_edges[g.edges[i].to].push_back(static_cast<int>(i));
    g.succ_edges[g.edges[i].from].push_back(static_cast<int>(i));
  }

  g.input_symbol.assign(nn, 0);
  int next_input = 1;
  for (auto& node : g.nodes) {
    if (node.kind == CfgNode::Kind::Statement && node.stmt_kind == Stmt::Kind::Input)
      g.input_symbol[node.id] = next_input++;
  }

  // Topological ranks (Kahn; ties by node id). The merged graph stays acyclic
  // because per-version edges point source-forward and matches preserve
  // statement order.
  g.topo_rank.assign(nn, -1);
  {
    std::vector<int> indeg(nn, 0);
    for (const auto& e : g.edges) ++indeg[e.to];
    std::set<NodeId> ready;
    for (size_t i = 0; i < nn; ++i)
      if (indeg[i] == 0) ready.insert(static_cast<NodeId>(i));
    int rank = 0;
    while (!ready.empty()) {
      NodeId nid = *ready.begin();
      ready.erase(ready.begin());
      g.topo_rank[nid] = rank++;
      for (int ei : g.succ_edges[nid])
        if (--indeg[g.edges[ei].to] == 0) ready.insert(g.edges[ei].to);
    }
    if (rank != static_cast<int>(nn))
      throw std::runtime_error("internal error: merged multiversion graph has a cycle");
  }

  // branch_free_above[n] bit v: every backward path from n to entry in
  // version v crosses no branch node.
  g.branch_free_above.assign(nn, VersionSet{});
  {
    std::vector<NodeId> order(nn);
    for (size_t i = 0; i < nn; ++i) order[g.topo_rank[i]] = static_cast<NodeId>(i);
    for (NodeId nid : order) {
      VersionSet free;
      if (nid == g.entry) {
        free = g.nodes[g.entry].versions;
      } else {
        free = g.nodes[nid].versions;
        for (int v : g.nodes[nid].versions.members()) {
          for (int ei : g.pred_edges[nid]) {
            const MvEdge& e = g.edges[ei];
            if (!e.versions.contains(v)) continue;
            if (g.nodes[e.from].kind == CfgNode::Kind::Branch ||
                !g.branch_free_above[e.from].contains(v)) {
              free.remove(v);
              break;
            }
          }
        }
      }
      g.branch_free_above[nid] = free;
    }
  }
  return g;
}

std::vector<NodeId> matched_points(const Mvicfg& g, VersionSet v) {
  std::vector<NodeId> out;
  for (const auto& n : g.nodes)
    if (n.versions.contains_all(v)) out.push_back(n.id);
  return out;
}

std::vector<PredEdge> preds(const Mvicfg& g, NodeId node, VersionSet v) {
  std::vector<PredEdge> out;
  for (int ei : g.pred_edges[node]) {
    const MvEdge& e = g.edges[ei];
    VersionSet inter = e.versions & v;
    if (!inter.empty()) out.push_back(PredEdge{e.from, e.label, inter});
  }
  std::sort(out.begin(), out.end(), [](const PredEdge& a, const PredEdge& b) {
    return std::tie(a.pred, a.label) < std::tie(b.pred, b.label);
  });
  return out;
}

std::vector<std::string> get_vars(const Mvicfg& g, NodeId point, VersionSet v) {
  if (point < 0 || point >= static_cast<NodeId>(g.nodes.size()))
    throw UnknownPoint("unknown point node " + std::to_string(point));
  std::set<std::string> vars;
  for (int ver : v.members()) {
    std::vector<char> seen(g.nodes.size(), 0);
    std::vector<NodeId> stack;
    if (g.nodes[point].versions.contains(ver)) {
      stack.push_back(point);
      seen[point] = 1;
    }
    while (!stack.empty()) {
      NodeId nid = stack.back();
      stack.pop_back();
      const MvNode& node = g.nodes[nid];
      if (node.kind == CfgNode::Kind::Statement) {
        vars.insert(node.target);
        if (node.stmt_kind == Stmt::Kind::Assign) {
          std::vector<std::string> vs;
          node.value.collect_vars(vs);
          vars.insert(vs.begin(), vs.end());
        }
      } else if (node.kind == CfgNode::Kind::Branch) {
        std::vector<std::string> vs;
        node.cond->lhs.collect_vars(vs);
        node.cond->rhs.collect_vars(vs);
        vars.insert(vs.begin(), vs.end());
      }
      for (int ei : g.pred_edges[nid]) {
        const MvEdge& e = g.edges[ei];
        if (!e.versions.contains(ver) || seen[e.from]) continue;
        seen[e.from] = 1;
        stack.push_back(e.from);
      }
    }
  }
  return {vars.begin(), vars.end()};
}

std::string projection_signature(const Mvicfg& g, int version) {
  // Same canonical form as cfg_signature, over the v-restricted graph.
  std::map<NodeId, int> order;
  std::vector<NodeId> stack{g.entry};
  std::vector<std::pair<NodeId, std::pair<int, NodeId>>> edge_list;
  while (!stack.empty()) {
    NodeId nid = stack.back();
    stack.pop_back();
    if (order.count(nid)) continue;
    order[nid] = static_cast<int>(order.size());
    std::vector<std::pair<int, NodeId>> outs;
    for (int ei : g.succ_edges[nid]) {
      const MvEdge& e = g.edges[ei];
      if (e.versions.contains(version)) outs.emplace_back(static_cast<int>(e.label), e.to);
    }
    std::sort(outs.begin(), outs.end());
    for (auto it = outs.rbegin(); it != outs.rend(); ++it) stack.push_back(it->second);
    for (auto& [l, to] : outs) edge_list.emplace_back(nid, std::make_pair(l, to));
  }
  std::ostringstream os;
  std::vector<std::pair<int, const MvNode*>> nodes;
  for (const auto& n : g.nodes)
    if (order.count(n.id)) nodes.emplace_back(order[n.id], &n);
  std::sort(nodes.begin(), nodes.end());
  for (auto& [idx, n] : nodes) os << idx << ":" << n->render() << ";";
  std::vector<std::string> edges;
  for (const auto& [from, rest] : edge_list) {
    std::ostringstream e;
    e << order[from] << "-" << rest.first << "->" << order.at(rest.second);
    edges.push_back(e.str());
  }
  std::sort(edges.begin(), edges.end());
  for (auto& e : edges) os << e << ";";
  return os.str();
}

namespace {
// Fig-2 style version range labels: {1,2,3} -> "1--3", {1,3} -> "1,3".
std::string version_label(VersionSet vs) {
  auto ms = vs.members();
  std::ostringstream os;
  os << "<";
  size_t i = 0;
  bool first = true;
  while (i < ms.size()) {
    size_t j = i;
    while (j + 1 < ms.size() && ms[j + 1] == ms[j] + 1) ++j;
    if (!first) os << ",";
    first = false;
    if (j > i + 1) {
      os << ms[i] << "--" << ms[j];
    } else if (j == i + 1) {
      os << ms[i] << "," << ms[j];
    } else {
      os << ms[i];
    }
    i = j + 1;
  }
  os << ">";
  return os.str();
}
}  // namespace

std::string mvicfg_to_dot(const Mvicfg& g) {
  std::ostringstream os;
  os << "digraph mvicfg {\n";
  for (const auto& n : g.nodes) {
    os << "  n" << n.id << " [label=\"" << n.id << ": " << n.render() << "\"";
    if (!n.versions.contains_all(VersionSet::all(g.n_versions))) os << " style=dashed";
    os << "];\n";
  }
  for (const auto& e : g.edges) {
    os << "  n" << e.from << " -> n" << e.to << " [label=\"" << version_label(e.versions);
    if (e.label != BranchLabel::None) os << " " << render_branch_label(e.label);
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ivdiff
