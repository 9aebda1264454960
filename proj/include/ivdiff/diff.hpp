// diff.hpp — minimal line diffs between consecutive program versions.
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ivdiff {

// One replacement region: lines removed from the old text and lines added in
// the new text. Either side may be empty, not both.
struct Hunk {
  int a_begin = 1;  // 1-based first removed line (insertion point if none)
  int b_begin = 1;
  std::vector<std::string> removed;
  std::vector<std::string> added;
};

struct EditScript {
  int from_version = 0;
  int to_version = 0;
  std::vector<Hunk> hunks;
  std::vector<std::pair<int, int>> matches;  // aligned identical lines, 1-based

  int edit_cost() const;  // total removed + added lines
};

// Minimal insert+delete line diff (Myers); deterministic, preferring the
// earliest deletion on ties.
EditScript diff_lines(std::span<const std::string> a, std::span<const std::string> b);

struct MismatchedBase : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Replays the script against its base; throws MismatchedBase when the base
// disagrees with the recorded removed lines.
std::vector<std::string> apply_script(const EditScript& script, std::span<const std::string> a);

// Unified diff text with standard `@@ -l,c +l,c @@` headers (context 3).
std::string render_unified(const EditScript& script, std::span<const std::string> a,
                           const std::string& label_a, const std::string& label_b);

// Parses unified diff text back into an edit script against base `a`.
EditScript parse_unified(const std::string& text, std::span<const std::string> a);

}  // namespace ivdiff
