#include "ivdiff/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace ivdiff {

using nlohmann::json;

void Report::sort() {
  std::sort(version_invariants.begin(), version_invariants.end(),
            [](const VersionInvariant& a, const VersionInvariant& b) {
              return std::tie(a.point, a.query, a.invariant) <
                     std::tie(b.point, b.query, b.invariant);
            });
  std::sort(invariant_churns.begin(), invariant_churns.end(),
            [](const InvariantChurn& a, const InvariantChurn& b) {
              return std::tie(a.from_version, a.to_version, a.point, a.query) <
                     std::tie(b.from_version, b.to_version, b.point, b.query);
            });
  std::sort(diagnostics.begin(), diagnostics.end());
  diagnostics.erase(std::unique(diagnostics.begin(), diagnostics.end()), diagnostics.end());
}

std::string render_json(const Report& r) {
  json j;
  j["tool_version"] = r.tool_version;
  j["config"] = json::object();
  for (const auto& [k, v] : r.config) j["config"][k] = v;
  j["version_invariants"] = json::array();
  for (const auto& vi : r.version_invariants) {
    json o;
    o["point"] = vi.point;
    o["versions"] = vi.versions.members();
    o["invariant"] = vi.invariant;
    o["query"] = vi.query;
    if (vi.unverified) o["unverified"] = true;
    j["version_invariants"].push_back(o);
  }
  j["invariant_churns"] = json::array();
  for (const auto& ic : r.invariant_churns) {
    json o;
    o["point"] = ic.point;
    o["from_version"] = ic.from_version;
    o["to_version"] = ic.to_version;
    o["query"] = ic.query;
    o["removed"] = ic.removed;
    o["added"] = ic.added;
    o["code_removed"] = ic.code_removed;
    o["code_added"] = ic.code_added;
    o["shared_lines"] = json::array();
    for (auto [a, b] : ic.shared_lines) o["shared_lines"].push_back(json::array({a, b}));
    j["invariant_churns"].push_back(o);
  }
  j["diagnostics"] = r.diagnostics;
  j["timing_ms"] = json::object();
  for (const auto& [k, v] : r.timing_ms) j["timing_ms"][k] = v;
  return j.dump(2) + "\n";
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  for (const auto& vi : r.version_invariants) {
    os << "VI @" << vi.point << " [";
    auto ms = vi.versions.members();
    for (size_t i = 0; i < ms.size(); ++i) os << (i ? "," : "") << ms[i];
    os << "]: " << vi.invariant;
    if (vi.unverified) os << "  (unverified)";
    os << "\n";
  }
  for (const auto& ic : r.invariant_churns) {
    os << "IC @" << ic.point << " v" << ic.from_version << "→v" << ic.to_version << ": ";
    os << "-{";
    for (size_t i = 0; i < ic.removed.size(); ++i) os << (i ? "; " : "") << ic.removed[i];
    os << "} +{";
    for (size_t i = 0; i < ic.added.size(); ++i) os << (i ? "; " : "") << ic.added[i];
    os << "}";
    if (!ic.code_added.empty() || !ic.code_removed.empty()) {
      os << " code:";
      if (!ic.code_added.empty()) {
        os << "+[";
        for (size_t i = 0; i < ic.code_added.size(); ++i)
          os << (i ? "," : "") << "L" << ic.code_added[i];
        os << "]";
      }
      if (!ic.code_removed.empty()) {
        os << "-[";
        for (size_t i = 0; i < ic.code_removed.size(); ++i)
          os << (i ? "," : "") << "L" << ic.code_removed[i];
        os << "]";
      }
    }
    if (!ic.shared_lines.empty()) {
      os << " shared:[";
      for (size_t i = 0; i < ic.shared_lines.size(); ++i) {
        os << (i ? "," : "") << "L" << ic.shared_lines[i].first << "↔L"
           << ic.shared_lines[i].second;
      }
      os << "]";
    }
    os << "\n";
  }
  if (r.version_invariants.empty() && r.invariant_churns.empty())
    os << "no version invariants; no invariant churns\n";
  return os.str();
}

Report parse_json(const std::string& text) {
  json j = json::parse(text);
  Report r;
  r.tool_version = j.value("tool_version", "");
  if (j.contains("config"))
    for (auto& [k, v] : j["config"].items()) r.config[k] = v.get<std::string>();
  for (const auto& o : j.value("version_invariants", json::array())) {
    VersionInvariant vi;
    vi.point = o.at("point").get<std::string>();
    for (int v : o.at("versions").get<std::vector<int>>()) vi.versions.add(v);
    vi.invariant = o.at("invariant").get<std::string>();
    vi.query = o.value("query", "");
    vi.unverified = o.value("unverified", false);
    r.version_invariants.push_back(std::move(vi));
  }
  for (const auto& o : j.value("invariant_churns", json::array())) {
    InvariantChurn ic;
    ic.point = o.at("point").get<std::string>();
    ic.from_version = o.at("from_version").get<int>();
    ic.to_version = o.at("to_version").get<int>();
    ic.query = o.value("query", "");
    ic.removed = o.at("removed").get<std::vector<std::string>>();
    ic.added = o.at("added").get<std::vector<std::string>>();
    ic.code_removed = o.at("code_removed").get<std::vector<int>>();
    ic.code_added = o.at("code_added").get<std::vector<int>>();
    for (const auto& p : o.at("shared_lines"))
      ic.shared_lines.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    r.invariant_churns.push_back(std::move(ic));
  }
  r.diagnostics = j.value("diagnostics", std::vector<std::string>{});
  if (j.contains("timing_ms"))
    for (auto& [k, v] : j["timing_ms"].items()) r.timing_ms[k] = v.get<long long>();
  return r;
}

}  // namespace ivdiff
