// cfg.hpp — per-version control flow graph with branch-labeled edges.
// Loops are unrolled once: `while (c) { B }` contributes a branch whose
// true arm runs B a single time, so the graph is acyclic.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ivdiff/minilang.hpp"

namespace ivdiff {

using NodeId = int;

enum class BranchLabel { None, True, False };

std::string render_branch_label(BranchLabel l);

struct CfgNode {
  NodeId id = 0;
  enum class Kind { Entry, Exit, Statement, Branch };
  Kind kind = Kind::Statement;
  // Statement payload (Assign/Input only; branch nodes carry cond instead).
  Stmt::Kind stmt_kind = Stmt::Kind::Assign;
  std::string target;
  Expr value;
  std::optional<CondAst> cond;
  bool from_loop = false;  // branch node came from a while
  int line = 0;            // absent (0) for Entry/Exit
  std::set<std::string> point_names;

  std::string render() const;
  // Variables this node reads or writes.
  std::vector<std::string> vars() const;
};

struct CfgEdge {
  NodeId from = 0;
  NodeId to = 0;
  BranchLabel label = BranchLabel::None;
};

struct Cfg {
  int version_index = 1;
  std::vector<CfgNode> nodes;  // indexed by id; entry first, exit last
  std::vector<CfgEdge> edges;
  NodeId entry = 0;
  NodeId exit = 0;
  std::vector<std::string> diagnostics;  // loop-unroll notices

  std::vector<NodeId> preds(NodeId n) const;
  std::vector<NodeId> succs(NodeId n) const;
};

Cfg build_cfg(const SourceUnit& unit);

struct UnknownPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Variables assigned or read on some Entry-to-point path, the point's own
// statement included; lexicographically sorted.
std::vector<std::string> get_vars(const Cfg& cfg, NodeId point);

std::string cfg_to_dot(const Cfg& cfg);

// Canonical signature of the graph shape and node contents, independent of
// node numbering; equal signatures mean isomorphic labeled graphs.
std::string cfg_signature(const Cfg& cfg);

}  // namespace ivdiff
