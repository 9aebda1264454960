// mvicfg.hpp — multiversion control flow graph: per-version CFGs merged so
// statements matched across versions appear once, with edges annotated by
// the set of versions they belong to.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ivdiff/cfg.hpp"
#include "ivdiff/diff.hpp"

namespace ivdiff {

// Bitset over version ordinals 1..n (n <= 64).
struct VersionSet {
  uint64_t bits = 0;

  static VersionSet single(int v) { return VersionSet{uint64_t(1) << (v - 1)}; }
  static VersionSet all(int n) {
    return VersionSet{n >= 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1};
  }

  bool empty() const { return bits == 0; }
  bool contains(int v) const { return bits & (uint64_t(1) << (v - 1)); }
  bool contains_all(VersionSet o) const { return (bits & o.bits) == o.bits; }
  int count() const { return __builtin_popcountll(bits); }
  void add(int v) { bits |= uint64_t(1) << (v - 1); }
  void remove(int v) { bits &= ~(uint64_t(1) << (v - 1)); }

  VersionSet operator&(VersionSet o) const { return VersionSet{bits & o.bits}; }
  VersionSet operator|(VersionSet o) const { return VersionSet{bits | o.bits}; }
  VersionSet operator-(VersionSet o) const { return VersionSet{bits & ~o.bits}; }

  std::vector<int> members() const;
  std::string render() const;  // "{1,2,3}"

  friend auto operator<=>(const VersionSet&, const VersionSet&) = default;
};

struct MvNode {
  NodeId id = 0;
  CfgNode::Kind kind = CfgNode::Kind::Statement;
  Stmt::Kind stmt_kind = Stmt::Kind::Assign;
  std::string target;
  Expr value;
  std::optional<CondAst> cond;
  VersionSet versions;
  std::map<int, int> line_per_version;
  std::set<std::string> point_names;

  std::string render() const;
};

struct MvEdge {
  NodeId from = 0;
  NodeId to = 0;
  BranchLabel label = BranchLabel::None;
  VersionSet versions;
};

struct InconsistentDiff {
  int from_version = 0;
  int to_version = 0;
  int from_line = 0;
  int to_line = 0;
};

struct Mvicfg {
  int n_versions = 0;
  std::vector<MvNode> nodes;
  std::vector<MvEdge> edges;
  NodeId entry = 0;
  NodeId exit = 0;
  std::vector<std::string> diagnostics;

  // Derived indexes, filled by build_mvicfg.
  std::vector<std::vector<int>> pred_edges;  // node -> incoming edge indices
  std::vector<std::vector<int>> succ_edges;
  std::vector<int> input_symbol;        // node -> 1-based input symbol, 0 if none
  std::vector<int> topo_rank;           // node -> topological rank from entry
  std::vector<VersionSet> branch_free_above;  // versions whose entry-cone above is branch-free

  const MvNode& node(NodeId id) const { return nodes[id]; }
  std::optional<NodeId> find_point(const std::string& name) const;
};

struct PredEdge {
  NodeId pred = 0;
  BranchLabel label = BranchLabel::None;
  VersionSet versions;  // already intersected with the request
};

Mvicfg build_mvicfg(std::span<const SourceUnit> units, std::span<const Cfg> cfgs,
                    std::span<const EditScript> diffs);

// Nodes present in every version of V; Entry and Exit always qualify.
std::vector<NodeId> matched_points(const Mvicfg& g, VersionSet v);

// Incoming edges of `node` with a nonempty intersection against V.
std::vector<PredEdge> preds(const Mvicfg& g, NodeId node, VersionSet v);

// Variables assigned or read on some entry-to-point path in any version of
// V, the point included; lexicographically sorted.
std::vector<std::string> get_vars(const Mvicfg& g, NodeId point, VersionSet v);

// Signature of the single-version restriction; equal to cfg_signature of the
// standalone CFG exactly when the projection is isomorphic to it.
std::string projection_signature(const Mvicfg& g, int version);

std::string mvicfg_to_dot(const Mvicfg& g);

}  // namespace ivdiff
