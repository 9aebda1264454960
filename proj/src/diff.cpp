#include "ivdiff/diff.hpp"

#include <algorithm>
#include <sstream>

namespace ivdiff {

int EditScript::edit_cost() const {
  int c = 0;
  for (const auto& h : hunks) c += static_cast<int>(h.removed.size() + h.added.size());
  return c;
}

namespace {

// Myers O(ND) shortest edit script. Returns the matched index pairs
// (0-based). On ties the trace-back prefers consuming a deletion first,
// which yields the earliest-deletion script.
std::vector<std::pair<int, int>> myers_matches(std::span<const std::string> a,
                                               std::span<const std::string> b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int max = n + m;
  if (max == 0) return {};
  std::vector<std::vector<int>> trace;
  std::vector<int> v(2 * max + 1, 0);
  auto idx = [max](int k) { return k + max; };
  int final_d = -1;
  for (int d = 0; d <= max && final_d < 0; ++d) {
    trace.push_back(v);
    for (int k = -d; k <= d; k += 2) {
      int x;
      if (k == -d || (k != d && v[idx(k - 1)] < v[idx(k + 1)])) {
        x = v[idx(k + 1)];  // insertion (move down in b)
      } else {
        x = v[idx(k - 1)] + 1;  // deletion (move right in a)
      }
      int y = x - k;
      while (x < n && y < m && a[x] == b[y]) {
        ++x;
        ++y;
      }
      v[idx(k)] = x;
      if (x >= n && y >= m) {
        final_d = d;
        break;
      }
    }
  }
  // Trace back.
  std::vector<std::pair<int, int>> matches;
  int x = n, y = m;
  for (int d = final_d; d > 0; --d) {
    const auto& pv = trace[d];
    int k = x - y;
    int prev_k;
    if (k == -d || (k != d && pv[idx(k - 1)] < pv[idx(k + 1)])) {
      prev_k = k + 1;
    } else {
      prev_k = k - 1;
    }
    int prev_x = pv[idx(prev_k)];
    int prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      matches.emplace_back(x - 1, y - 1);
      --x;
      --y;
    }
    if (prev_k == k + 1) {
      --y;  // an insertion
    } else {
      --x;  // a deletion
    }
    x = prev_x;
    y = prev_y;
  }
  while (x > 0 && y > 0) {
    matches.emplace_back(x - 1, y - 1);
    --x;
    --y;
  }
  std::reverse(matches.begin(), matches.end());
  return matches;
}

}  // namespace

EditScript diff_lines(std::span<const std::string> a, std::span<const std::string> b) {
  EditScript script;
  // Canonical orientation keeps the matching symmetric: diff(b, a) flips
  // diff(a, b) exactly. The earliest-deletion tie-break applies to the
  // lexicographically smaller side.
  std::vector<std::pair<int, int>> matches0;
  if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())) {
    matches0 = myers_matches(b, a);
    for (auto& [x, y] : matches0) std::swap(x, y);
  } else {
    matches0 = myers_matches(a, b);
  }
  int ai = 0, bi = 0;
  for (size_t mi = 0; mi <= matches0.size(); ++mi) {
    int ma = mi < matches0.size() ? matches0[mi].first : static_cast<int>(a.size());
    int mb = mi < matches0.size() ? matches0[mi].second : static_cast<int>(b.size());
    if (ai < ma || bi < mb) {
      Hunk h;
      h.a_begin = ai + 1;
      h.b_begin = bi + 1;
      for (int i = ai; i < ma; ++i) h.removed.push_back(a[i]);
      for (int i = bi; i < mb; ++i) h.added.push_back(b[i]);
      script.hunks.push_back(std::move(h));
    }
    if (mi < matches0.size()) script.matches.emplace_back(ma + 1, mb + 1);
    ai = ma + 1;
    bi = mb + 1;
  }
  return script;
}

std::vector<std::string> apply_script(const EditScript& script, std::span<const std::string> a) {
  std::vector<std::string> out;
  int ai = 0;  // 0-based next unconsumed line of a
  for (const auto& h : script.hunks) {
    int start = h.a_begin - 1;
    if (start < ai || start > static_cast<int>(a.size()))
      throw MismatchedBase("hunk out of order at line " + std::to_string(h.a_begin));
    while (ai < start) out.push_back(a[ai++]);
    for (const auto& r : h.removed) {
      if (ai >= static_cast<int>(a.size()) || a[ai] != r)
        throw MismatchedBase("base text disagrees with script at line " + std::to_string(ai + 1));
      ++ai;
    }
    for (const auto& add : h.added) out.push_back(add);
  }
  while (ai < static_cast<int>(a.size())) out.push_back(a[ai++]);
  return out;
}

std::string render_unified(const EditScript& script, std::span<const std::string> a,
                           const std::string& label_a, const std::string& label_b) {
  constexpr int kContext = 3;
  std::ostringstream os;
  os << "--- " << label_a << "\n+++ " << label_b << "\n";
  size_t hi = 0;
  while (hi < script.hunks.size()) {
    // Group hunks whose context windows touch.
    size_t hj = hi;
    while (hj + 1 < script.hunks.size()) {
      const auto& cur = script.hunks[hj];
      int cur_end = cur.a_begin + static_cast<int>(cur.removed.size());
      if (script.hunks[hj + 1].a_begin - cur_end <= 2 * kContext) {
        ++hj;
      } else {
        break;
      }
    }
    const auto& first = script.hunks[hi];
    const auto& last = script.hunks[hj];
    int a_start = std::max(1, first.a_begin - kContext);
    int a_stop = std::min(static_cast<int>(a.size()),
                          last.a_begin + static_cast<int>(last.removed.size()) - 1 + kContext);
    int b_start = first.b_begin - (first.a_begin - a_start);
    std::ostringstream body;
    int a_count = 0, b_count = 0;
    int ai = a_start;
    for (size_t k = hi; k <= hj; ++k) {
      const auto& h = script.hunks[k];
      while (ai < h.a_begin) {
        body << " " << a[ai - 1] << "\n";
        ++a_count;
        ++b_count;
        ++ai;
      }
      for (const auto& r : h.removed) {
        body << "-" << r << "\n";
        ++a_count;
        ++ai;
      }
      for (const auto& add : h.added) {
        body << "+" << add << "\n";
        ++b_count;
      }
    }
    while (ai <= a_stop) {
      body << " " << a[ai - 1] << "\n";
      ++a_count;
      ++b_count;
      ++ai;
    }
    os << "@@ -" << (a_count == 0 ? a_start - 1 : a_start) << "," << a_count << " +"
       << (b_count == 0 ? b_start - 1 : b_start) << "," << b_count << " @@\n";
    os << body.str();
    hi = hj + 1;
  }
  return os.str();
}

EditScript parse_unified(const std::string& text, std::span<const std::string> a) {
  // Rebuild the target text by replaying the hunk bodies, then re-diff; this
  // tolerates any producer's context width and grouping.
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> b;
  int ai = 0;  // 0-based cursor into a
  bool saw_hunk = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("--- ", 0) == 0 || line.rfind("+++ ", 0) == 0) continue;
    if (line.rfind("@@", 0) == 0) {
      int a_start = 0;
      if (sscanf(line.c_str(), "@@ -%d", &a_start) != 1)
        throw MismatchedBase("malformed hunk header: " + line);
      saw_hunk = true;
      int target = std::max(a_start - 1, 0);
      if (target < ai) throw MismatchedBase("overlapping hunks in diff");
      while (ai < target && ai < static_cast<int>(a.size())) b.push_back(a[ai++]);
      continue;
    }
    if (!saw_hunk) continue;
    if (line.empty()) continue;
    char tag = line[0];
    std::string content = line.substr(1);
    if (tag == ' ') {
      if (ai >= static_cast<int>(a.size()) || a[ai] != content)
        throw MismatchedBase("context line disagrees with base at line " + std::to_string(ai + 1));
      b.push_back(a[ai++]);
    } else if (tag == '-') {
      if (ai >= static_cast<int>(a.size()) || a[ai] != content)
        throw MismatchedBase("removed line disagrees with base at line " + std::to_string(ai + 1));
      ++ai;
    } else if (tag == '+') {
      b.push_back(content);
    } else if (tag == '\\') {
      continue;  // "\ No newline at end of file"
    } else {
      throw MismatchedBase("unexpected diff line: " + line);
    }
  }
  while (ai < static_cast<int>(a.size())) b.push_back(a[ai++]);
  return diff_lines(a, b);
}

}  // namespace ivdiff
