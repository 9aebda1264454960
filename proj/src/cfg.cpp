#include "ivdiff/cfg.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ivdiff {

std::string render_branch_label(BranchLabel l) {
  switch (l) {
    case BranchLabel::None:
      return "";
    case BranchLabel::True:
      return "T";
    case BranchLabel::False:
      return "F";
  }
  return "";
}

std::string CfgNode::render() const {
  switch (kind) {
    case Kind::Entry:
      return "entry";
    case Kind::Exit:
      return "exit";
    case Kind::Branch:
      return "if (" + cond->render() + ")";
    case Kind::Statement:
      if (stmt_kind == Stmt::Kind::Input) return "input " + target;
      return target + " = " + value.render();
  }
  return "";
}

std::vector<std::string> CfgNode::vars() const {
  std::vector<std::string> out;
  switch (kind) {
    case Kind::Statement:
      out.push_back(target);
      if (stmt_kind == Stmt::Kind::Assign) value.collect_vars(out);
      break;
    case Kind::Branch:
      cond->lhs.collect_vars(out);
      cond->rhs.collect_vars(out);
      break;
    default:
      break;
  }
  return out;
}

std::vector<NodeId> Cfg::preds(NodeId n) const {
  std::vector<NodeId> out;
  for (const auto& e : edges)
    if (e.to == n) out.push_back(e.from);
  return out;
}

std::vector<NodeId> Cfg::succs(NodeId n) const {
  std::vector<NodeId> out;
  for (const auto& e : edges)
    if (e.from == n) out.push_back(e.to);
  return out;
}

namespace {

struct Builder {
  Cfg cfg;

  NodeId add_node(CfgNode n) {
    n.id = static_cast<NodeId>(cfg.nodes.size());
    cfg.nodes.push_back(std::move(n));
    return cfg.nodes.back().id;
  }

  void connect(const std::vector<std::pair<NodeId, BranchLabel>>& froms, NodeId to) {
    for (auto [f, l] : froms) cfg.edges.push_back(CfgEdge{f, to, l});
  }

  // Builds the chain for stmts given dangling in-edges; returns the new
  // dangling out-edges.
  std::vector<std::pair<NodeId, BranchLabel>> build(
      const std::vector<Stmt>& stmts, std::vector<std::pair<NodeId, BranchLabel>> incoming) {
    for (const Stmt& s : stmts) {
      switch (s.kind) {
        case Stmt::Kind::Assign:
        case Stmt::Kind::Input: {
          CfgNode n;
          n.kind = CfgNode::Kind::Statement;
          n.stmt_kind = s.kind;
          n.target = s.target;
          n.value = s.value;
          n.line = s.line;
          n.point_names.insert(s.points.begin(), s.points.end());
          NodeId id = add_node(std::move(n));
          connect(incoming, id);
          incoming = {{id, BranchLabel::None}};
          break;
        }
        case Stmt::Kind::If:
        case Stmt::Kind::While: {
          CfgNode n;
          n.kind = CfgNode::Kind::Branch;
          n.cond = s.cond;
          n.from_loop = s.kind == Stmt::Kind::While;
          n.line = s.line;
          n.point_names.insert(s.points.begin(), s.points.end());
          NodeId id = add_node(std::move(n));
          connect(incoming, id);
          if (s.kind == Stmt::Kind::While) {
            cfg.diagnostics.push_back("loop at line " + std::to_string(s.line) +
                                      " unrolled once (body runs zero or one time)");
          }
          auto out_true = build(s.body, {{id, BranchLabel::True}});
          std::vector<std::pair<NodeId, BranchLabel>> out_false;
          if (s.kind == Stmt::Kind::If && !s.else_body.empty()) {
            out_false = build(s.else_body, {{id, BranchLabel::False}});
          } else {
            out_false = {{id, BranchLabel::False}};
          }
          incoming = std::move(out_true);
          incoming.insert(incoming.end(), out_false.begin(), out_false.end());
          break;
        }
      }
    }
    return incoming;
  }
};

}  // namespace

Cfg build_cfg(const SourceUnit& unit) {
  Builder b;
  b.cfg.version_index = unit.version_index;
  CfgNode entry;
  entry.kind = CfgNode::Kind::Entry;
  entry.point_names.insert("entry");
  b.cfg.entry = b.add_node(std::move(entry));
  auto dangling = b.build(unit.stmts, {{b.cfg.entry, BranchLabel::None}});
  CfgNode exit_node;
  exit_node.kind = CfgNode::Kind::Exit;
  exit_node.point_names.insert("exit");
  b.cfg.exit = b.add_node(std::move(exit_node));
  b.connect(dangling, b.cfg.exit);
  return b.cfg;
}

std::vector<std::string> get_vars(const Cfg& cfg, NodeId point) {
  if (point < 0 || point >= static_cast<NodeId>(cfg.nodes.size()))
    throw UnknownPoint("unknown point node " + std::to_string(point));
  // Nodes that can reach `point`, point included.
  std::vector<char> seen(cfg.nodes.size(), 0);
  std::vector<NodeId> stack{point};
  seen[point] = 1;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (NodeId p : cfg.preds(n)) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::set<std::string> vars;
  for (const auto& n : cfg.nodes) {
    if (!seen[n.id]) continue;
    for (auto& v : n.vars()) vars.insert(v);
  }
  return {vars.begin(), vars.end()};
}

std::string cfg_to_dot(const Cfg& cfg) {
  std::ostringstream os;
  os << "digraph cfg_v" << cfg.version_index << " {\n";
  for (const auto& n : cfg.nodes)
    os << "  n" << n.id << " [label=\"" << n.id << ": " << n.render() << "\"];\n";
  for (const auto& e : cfg.edges) {
    os << "  n" << e.from << " -> n" << e.to;
    if (e.label != BranchLabel::None) os << " [label=\"" << render_branch_label(e.label) << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string cfg_signature(const Cfg& cfg) {
  // Deterministic DFS relabeling: out-edges ordered None < True < False.
  std::map<NodeId, int> order;
  std::ostringstream os;
  std::vector<NodeId> stack{cfg.entry};
  std::vector<std::pair<NodeId, std::pair<int, NodeId>>> edge_list;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (order.count(n)) continue;
    order[n] = static_cast<int>(order.size());
    std::vector<std::pair<int, NodeId>> outs;
    for (const auto& e : cfg.edges)
      if (e.from == n) outs.emplace_back(static_cast<int>(e.label), e.to);
    std::sort(outs.begin(), outs.end());
    for (auto it = outs.rbegin(); it != outs.rend(); ++it) stack.push_back(it->second);
    for (auto& [l, to] : outs) edge_list.emplace_back(n, std::make_pair(l, to));
  }
  // Emit nodes in discovery order with their content, then edges.
  std::vector<std::pair<int, const CfgNode*>> nodes;
  for (const auto& n : cfg.nodes)
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

}  // namespace ivdiff
