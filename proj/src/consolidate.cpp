#include "ivdiff/consolidate.hpp"

#include <algorithm>
#include <set>

namespace ivdiff {

std::vector<VersionInvariant> computing_vi(const AnalysisResult& result, VersionSet v) {
  std::vector<VersionInvariant> out;
  for (size_t qi = 0; qi < result.queries.size(); ++qi) {
    std::optional<ResolvedInvariant> common;
    bool ok = true;
    for (int ver : v.members()) {
      auto inv = result.invariant(static_cast<int>(qi), ver);
      if (!inv) {
        ok = false;
        break;
      }
      if (!common) {
        common = inv;
      } else if (common->text != inv->text) {
        ok = false;
        break;
      } else {
        common->unverified |= inv->unverified;
      }
    }
    if (ok && common) {
      out.push_back(VersionInvariant{result.queries[qi].point_name, v, common->text,
                                     result.queries[qi].tmpl.id(), common->unverified});
    }
  }
  return out;
}

std::vector<InvariantChurn> computing_ic(const AnalysisResult& result, const Mvicfg& g,
                                         std::span<const std::pair<int, int>> pairs) {
  std::vector<InvariantChurn> out;
  for (auto [from, to] : pairs) {
    for (size_t qi = 0; qi < result.queries.size(); ++qi) {
      auto inv_from = result.invariant(static_cast<int>(qi), from);
      auto inv_to = result.invariant(static_cast<int>(qi), to);
      bool same = (!inv_from && !inv_to) ||
                  (inv_from && inv_to && inv_from->text == inv_to->text);
      if (same) continue;

      InvariantChurn churn;
      churn.point = result.queries[qi].point_name;
      churn.from_version = from;
      churn.to_version = to;
      churn.query = result.queries[qi].tmpl.id();
      if (inv_from) churn.removed.push_back(inv_from->text);
      if (inv_to) churn.added.push_back(inv_to->text);

      // Contributing nodes of both sides, classified by version membership.
      std::set<NodeId> nodes;
      const auto& entries = result.entries[qi];
      if (auto it = entries.find(from); it != entries.end())
        nodes.insert(it->second.contrib.begin(), it->second.contrib.end());
      if (auto it = entries.find(to); it != entries.end())
        nodes.insert(it->second.contrib.begin(), it->second.contrib.end());
      std::set<int> code_removed, code_added;
      std::set<std::pair<int, int>> shared;
      for (NodeId n : nodes) {
        const MvNode& node = g.node(n);
        bool in_from = node.versions.contains(from);
        bool in_to = node.versions.contains(to);
        if (in_from && in_to) {
          shared.insert({node.line_per_version.at(from), node.line_per_version.at(to)});
        } else if (in_from) {
          code_removed.insert(node.line_per_version.at(from));
        } else if (in_to) {
          code_added.insert(node.line_per_version.at(to));
        }
      }
      churn.code_removed.assign(code_removed.begin(), code_removed.end());
      churn.code_added.assign(code_added.begin(), code_added.end());
      churn.shared_lines.assign(shared.begin(), shared.end());
      out.push_back(std::move(churn));
    }
  }
  return out;
}

}  // namespace ivdiff
