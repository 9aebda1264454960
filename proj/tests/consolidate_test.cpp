#include <algorithm>

#include "doctest.h"
#include "ivdiff/consolidate.hpp"
#include "ivdiff/oracle.hpp"
#include "support/testutil.hpp"

using namespace ivdiff;

namespace {

struct Built {
  std::vector<SourceUnit> units;
  std::vector<Cfg> cfgs;
  std::vector<EditScript> diffs;
  Mvicfg g;
};

Built build_from_texts(const std::vector<std::string>& texts) {
  Built b;
  for (size_t i = 0; i < texts.size(); ++i) b.units.push_back(parse(texts[i], (int)i + 1));
  for (const auto& u : b.units) b.cfgs.push_back(build_cfg(u));
  for (size_t i = 0; i + 1 < b.units.size(); ++i)
    b.diffs.push_back(diff_lines(b.units[i].lines, b.units[i + 1].lines));
  b.g = build_mvicfg(b.units, b.cfgs, b.diffs);
  return b;
}

Built build_fig1() {
  return build_from_texts({test::slurp(test::testdata("fig1/v1.mini")),
                           test::slurp(test::testdata("fig1/v2.mini")),
                           test::slurp(test::testdata("fig1/v3.mini"))});
}

}  // namespace

TEST_CASE("version invariants of the running example") {
  Built b = build_fig1();
  EngineConfig config;
  config.versions = VersionSet::all(3);
  AnalysisResult r = run(b.g, config);
  auto vis = computing_vi(r, config.versions);
  std::vector<std::string> texts;
  for (const auto& vi : vis) {
    CHECK(vi.versions == config.versions);
    CHECK(vi.point == "exit");
    texts.push_back(vi.invariant);
  }
  std::sort(texts.begin(), texts.end());
  CHECK(texts == std::vector<std::string>{"a = 2", "c = 2"});
}

TEST_CASE("no version invariant when versions disagree") {
  Built b = build_fig1();
  EngineConfig config;
  config.versions = VersionSet{0b110};  // versions 2 and 3
  config.var_filter = {"b"};
  AnalysisResult r = run(b.g, config);
  CHECK(computing_vi(r, config.versions).empty());
}

TEST_CASE("inequality version invariant over versions 1 and 3") {
  Built b = build_fig1();
  EngineConfig config;
  config.versions = VersionSet{0b101};
  config.tmpl_const = false;
  config.ineq_explicit = {IneqSpec{"b", Rel::Gt, "a1"}};
  AnalysisResult r = run(b.g, config);
  auto vis = computing_vi(r, config.versions);
  REQUIRE(vis.size() == 1);
  CHECK(vis[0].invariant == "b > a1");
  CHECK(vis[0].versions == config.versions);
}

TEST_CASE("churns of the running example with line attribution") {
  Built b = build_fig1();
  EngineConfig config;
  config.versions = VersionSet::all(3);
  AnalysisResult r = run(b.g, config);
  std::vector<std::pair<int, int>> pairs{{1, 2}, {2, 3}};
  auto churns = computing_ic(r, b.g, pairs);

  // Between versions 2 and 3, b's invariant changes from 3 to 4; the code
  // attribution names the added lines (b++ at v3 line 6, b = 4 at v3 line 9)
  // and the shared lines a = 2 (1<->1) and b = a + 1 (3<->3).
  auto it = std::find_if(churns.begin(), churns.end(), [](const InvariantChurn& c) {
    return c.from_version == 2 && c.to_version == 3 && c.query == "b = ?";
  });
  REQUIRE(it != churns.end());
  CHECK(it->removed == std::vector<std::string>{"b = 3"});
  CHECK(it->added == std::vector<std::string>{"b = 4"});
  CHECK(it->code_added == std::vector<int>{6, 9});
  CHECK(it->code_removed.empty());
  CHECK(it->shared_lines == std::vector<std::pair<int, int>>{{1, 1}, {3, 3}});

  // Between versions 1 and 2, d's invariant disappears.
  it = std::find_if(churns.begin(), churns.end(), [](const InvariantChurn& c) {
    return c.from_version == 1 && c.to_version == 2 && c.query == "d = ?";
  });
  REQUIRE(it != churns.end());
  CHECK(it->removed == std::vector<std::string>{"d = 2 + input_1"});
  CHECK(it->added.empty());
  // Added code: the increment (v2 line 5) and c = b - 1 (v2 line 7);
  // removed code: c = 2 (v1 line 4).
  CHECK(it->code_added == std::vector<int>{5, 7});
  CHECK(it->code_removed == std::vector<int>{4});
  // Shared contributing lines include the input (2<->2) and the raise point
  // d = c + a1 (5<->8).
  CHECK(std::count(it->shared_lines.begin(), it->shared_lines.end(), std::make_pair(2, 2)) == 1);
  CHECK(std::count(it->shared_lines.begin(), it->shared_lines.end(), std::make_pair(5, 8)) == 1);

  // c never churns: it is 2 everywhere.
  for (const auto& c : churns) CHECK(c.query != "c = ?");
}

TEST_CASE("identical versions produce no churns") {
  std::string text = test::slurp(test::testdata("fig1/v2.mini"));
  Built b = build_from_texts({text, text});
  EngineConfig config;
  config.versions = VersionSet{0b11};
  AnalysisResult r = run(b.g, config);
  std::vector<std::pair<int, int>> pairs{{1, 2}};
  CHECK(computing_ic(r, b.g, pairs).empty());
}

TEST_CASE("churn symmetry: swapping the pair swaps the sides") {
  Built b = build_fig1();
  EngineConfig config;
  config.versions = VersionSet::all(3);
  AnalysisResult r = run(b.g, config);
  std::vector<std::pair<int, int>> fwd{{2, 3}};
  std::vector<std::pair<int, int>> bwd{{3, 2}};
  auto f = computing_ic(r, b.g, fwd);
  auto w = computing_ic(r, b.g, bwd);
  REQUIRE(f.size() == w.size());
  for (size_t i = 0; i < f.size(); ++i) {
    auto match = std::find_if(w.begin(), w.end(), [&](const InvariantChurn& c) {
      return c.query == f[i].query && c.point == f[i].point;
    });
    REQUIRE(match != w.end());
    CHECK(f[i].removed == match->added);
    CHECK(f[i].added == match->removed);
    CHECK(f[i].code_added == match->code_removed);
    CHECK(f[i].code_removed == match->code_added);
    std::vector<std::pair<int, int>> flipped;
    for (auto [x, y] : match->shared_lines) flipped.emplace_back(y, x);
    std::sort(flipped.begin(), flipped.end());
    CHECK(f[i].shared_lines == flipped);
  }
}

TEST_CASE("a candidate never appears as both VI and churn for the same pair") {
  Built b = build_fig1();
  EngineConfig config;
  config.versions = VersionSet::all(3);
  AnalysisResult r = run(b.g, config);
  std::vector<std::pair<int, int>> pairs{{1, 2}, {2, 3}};
  auto vis = computing_vi(r, config.versions);
  auto churns = computing_ic(r, b.g, pairs);
  for (const auto& vi : vis)
    for (const auto& c : churns) CHECK(!(vi.point == c.point && vi.query == c.query));
}

TEST_CASE("emitted version invariants re-check under the oracle") {
  test::Rng rng(808);
  for (int i = 0; i < 25; ++i) {
    std::vector<std::string> texts{test::generate_program(rng)};
    texts.push_back(test::mutate_program(rng, texts.back(), 2));
    Built b = build_from_texts(texts);
    EngineConfig config;
    config.versions = VersionSet{0b11};
    AnalysisResult r = run(b.g, config);
    OracleResult oracle = oracle_run(b.g, config);
    for (const auto& vi : computing_vi(r, config.versions)) {
      for (int v : config.versions.members()) {
        int q = -1;
        for (size_t k = 0; k < oracle.queries.size(); ++k)
          if (oracle.queries[k].tmpl.id() == vi.query) q = static_cast<int>(k);
        REQUIRE(q >= 0);
        const auto& oinv = oracle.per_version[q].at(v);
        REQUIRE(oinv.has_value());
        CHECK(oinv->text == vi.invariant);
      }
    }
  }
}

TEST_CASE("attributed churn lines fall inside diff hunks") {
  test::Rng rng(99331);
  for (int i = 0; i < 25; ++i) {
    std::vector<std::string> texts{test::generate_program(rng)};
    texts.push_back(test::mutate_program(rng, texts.back(), 3));
    Built b = build_from_texts(texts);
    EngineConfig config;
    config.versions = VersionSet{0b11};
    AnalysisResult r = run(b.g, config);
    std::vector<std::pair<int, int>> pairs{{1, 2}};
    std::set<int> removed_lines, added_lines;
    std::set<std::pair<int, int>> matched;
    const EditScript& d = b.diffs[0];
    for (const auto& h : d.hunks) {
      for (size_t k = 0; k < h.removed.size(); ++k)
        removed_lines.insert(h.a_begin + static_cast<int>(k));
      for (size_t k = 0; k < h.added.size(); ++k)
        added_lines.insert(h.b_begin + static_cast<int>(k));
    }
    for (auto [x, y] : d.matches) matched.insert({x, y});
    for (const auto& c : computing_ic(r, b.g, pairs)) {
      for (int line : c.code_removed) CHECK(removed_lines.count(line));
      for (int line : c.code_added) CHECK(added_lines.count(line));
      for (auto [x, y] : c.shared_lines) CHECK(matched.count({x, y}));
    }
  }
}
