#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ivdiff/driver.hpp"
#include "ivdiff/report.hpp"
#include "support/testutil.hpp"

using namespace ivdiff;

namespace {

struct RunOutput {
  int code = 0;
  std::string out;
  std::string err;
};

RunOutput drive(DriverOptions options) {
  std::ostringstream out, err;
  RunOutput r;
  r.code = run_driver(options, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

DriverOptions fig1_options() {
  DriverOptions o;
  o.version_files = {test::testdata("fig1/v1.mini"), test::testdata("fig1/v2.mini"),
                     test::testdata("fig1/v3.mini")};
  return o;
}

}  // namespace

TEST_CASE("running example end to end, json") {
  DriverOptions o = fig1_options();
  o.format = "json";
  o.tmpl_linear = false;
  auto r = drive(o);
  REQUIRE(r.code == kExitOk);
  Report rep = parse_json(r.out);
  bool has_c2 = false;
  for (const auto& vi : rep.version_invariants)
    has_c2 |= vi.invariant == "c = 2" && vi.versions == VersionSet{0b111};
  CHECK(has_c2);
  bool has_b_churn = false;
  for (const auto& ic : rep.invariant_churns)
    has_b_churn |= ic.from_version == 2 && ic.to_version == 3 &&
                   ic.removed == std::vector<std::string>{"b = 3"} &&
                   ic.added == std::vector<std::string>{"b = 4"};
  CHECK(has_b_churn);
}

TEST_CASE("no files is a usage error") {
  DriverOptions o;
  auto r = drive(o);
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("missing file is a usage error") {
  DriverOptions o;
  o.version_files = {"/nonexistent/far/away.mini"};
  CHECK(drive(o).code == kExitUsage);
}

TEST_CASE("syntax errors are reported with position") {
  std::string path = test::testdata("bad_syntax.mini");
  {
    std::ofstream f(path);
    f << "if (x >) {}\n";
  }
  DriverOptions o;
  o.version_files = {path};
  auto r = drive(o);
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("line 1") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("budget exhaustion exits 3") {
  DriverOptions o = fig1_options();
  o.budget = 2;
  CHECK(drive(o).code == kExitBudget);
}

TEST_CASE("oracle agreement on the running example exits 0") {
  DriverOptions o = fig1_options();
  o.oracle = true;
  o.ineq = {"b>a1"};
  CHECK(drive(o).code == kExitOk);
}

TEST_CASE("json output is byte-identical across runs") {
  DriverOptions o = fig1_options();
  o.format = "json";
  auto a = drive(o);
  auto b = drive(o);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("version-subset runs never add findings") {
  DriverOptions full = fig1_options();
  full.format = "json";
  auto fr = drive(full);
  REQUIRE(fr.code == kExitOk);
  Report full_rep = parse_json(fr.out);

  DriverOptions sub = fig1_options();
  sub.format = "json";
  sub.versions = {2, 3};
  auto sr = drive(sub);
  REQUIRE(sr.code == kExitOk);
  Report sub_rep = parse_json(sr.out);

  // Churns for (2,3) coincide with the full run's (2,3) churns.
  auto churn_key = [](const InvariantChurn& c) {
    std::string removed, added;
    for (const auto& s : c.removed) removed += s + ";";
    for (const auto& s : c.added) added += s + ";";
    return c.point + "|" + c.query + "|" + std::to_string(c.from_version) + ">" +
           std::to_string(c.to_version) + "|" + removed + "|" + added;
  };
  std::set<std::string> full_churns;
  for (const auto& c : full_rep.invariant_churns) full_churns.insert(churn_key(c));
  for (const auto& c : sub_rep.invariant_churns)
    CHECK(full_churns.count(churn_key(c)));
  // Version invariants of the subset are a superset projection: anything
  // invariant over {1,2,3} and queried in both runs stays invariant
  // over {2,3}.
  std::set<std::string> sub_vis;
  for (const auto& vi : sub_rep.version_invariants) sub_vis.insert(vi.point + "|" + vi.invariant);
  for (const auto& vi : full_rep.version_invariants)
    CHECK(sub_vis.count(vi.point + "|" + vi.invariant));
}

TEST_CASE("trace mode streams transfers to the error stream") {
  DriverOptions o = fig1_options();
  o.trace = true;
  o.vars = {"c"};
  o.tmpl_linear = false;
  auto r = drive(o);
  REQUIRE(r.code == kExitOk);
  CHECK(r.err.find("raise q=0") != std::string::npos);
  CHECK(r.err.find("transfer q=0") != std::string::npos);
}

TEST_CASE("emitted artifacts land in files") {
  DriverOptions o = fig1_options();
  o.emit_mvicfg_path = test::testdata("out.mvicfg.dot");
  o.emit_diff_prefix = test::testdata("out.diff");
  o.emit_cfg_prefix = test::testdata("out.cfg");
  auto r = drive(o);
  REQUIRE(r.code == kExitOk);
  std::string dot = test::slurp(test::testdata("out.mvicfg.dot"));
  CHECK(dot.find("digraph mvicfg") != std::string::npos);
  std::string diff12 = test::slurp(test::testdata("out.diff.1-2.diff"));
  CHECK(diff12.find("@@") != std::string::npos);
  std::string cfg1 = test::slurp(test::testdata("out.cfg.v1.dot"));
  CHECK(cfg1.find("digraph cfg_v1") != std::string::npos);
  for (const char* f : {"out.mvicfg.dot", "out.diff.1-2.diff", "out.diff.2-3.diff",
                        "out.cfg.v1.dot", "out.cfg.v2.dot", "out.cfg.v3.dot"})
    std::remove(test::testdata(f).c_str());
}

TEST_CASE("external unified diffs are accepted") {
  // Emit our own diffs, then feed them back through --use-diff.
  DriverOptions emit = fig1_options();
  emit.emit_diff_prefix = test::testdata("ext.diff");
  REQUIRE(drive(emit).code == kExitOk);
  DriverOptions o = fig1_options();
  o.format = "json";
  o.use_diff_files = {test::testdata("ext.diff.1-2.diff"), test::testdata("ext.diff.2-3.diff")};
  auto with_ext = drive(o);
  DriverOptions plain = fig1_options();
  plain.format = "json";
  auto without = drive(plain);
  CHECK(with_ext.code == kExitOk);
  CHECK(with_ext.out == without.out);
  std::remove(test::testdata("ext.diff.1-2.diff").c_str());
  std::remove(test::testdata("ext.diff.2-3.diff").c_str());
}

TEST_CASE("disabled != templates are rejected without the flag") {
  DriverOptions o = fig1_options();
  o.ineq = {"b!=a1"};
  CHECK(drive(o).code == kExitUsage);
  o.allow_ne = true;
  CHECK(drive(o).code == kExitOk);
}

TEST_CASE("pairs outside the versions of interest are rejected") {
  DriverOptions o = fig1_options();
  o.versions = {2, 3};
  o.pairs = {{1, 2}};
  CHECK(drive(o).code == kExitUsage);
}
