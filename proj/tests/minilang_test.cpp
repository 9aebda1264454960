#include "doctest.h"
#include "ivdiff/minilang.hpp"
#include "support/testutil.hpp"

using namespace ivdiff;

TEST_CASE("single assignment") {
  SourceUnit u = parse("a = 2;", 1);
  REQUIRE(u.stmts.size() == 1);
  CHECK(u.stmts[0].kind == Stmt::Kind::Assign);
  CHECK(u.stmts[0].target == "a");
  CHECK(u.stmts[0].value == Expr::lit(2));
  CHECK(u.stmts[0].line == 1);
}

TEST_CASE("version 2 of the running example") {
  SourceUnit u = parse(test::slurp(test::testdata("fig1/v2.mini")), 2);
  // Six top-level statements; the if carries one nested statement.
  REQUIRE(u.stmts.size() == 6);
  CHECK(u.stmts[0].kind == Stmt::Kind::Assign);
  CHECK(u.stmts[1].kind == Stmt::Kind::Input);
  CHECK(u.stmts[1].target == "a1");
  const Stmt& br = u.stmts[3];
  CHECK(br.kind == Stmt::Kind::If);
  CHECK(br.cond.rel == Rel::Gt);
  REQUIRE(br.body.size() == 1);
  // a1++ desugars to a1 = a1 + 1.
  CHECK(br.body[0].kind == Stmt::Kind::Assign);
  CHECK(br.body[0].target == "a1");
  CHECK(br.body[0].value == Expr::binary('+', Expr::var("a1"), Expr::lit(1)));
  CHECK(br.else_body.empty());
  CHECK(u.stmts[4].target == "c");
  CHECK(u.stmts[5].target == "d");
}

TEST_CASE("malformed input reports position") {
  try {
    parse("if (x >) {}", 1);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 8);
  }
}

TEST_CASE("unsupported constructs are called out") {
  CHECK_THROWS_AS(parse("for (i = 0) {}", 1), UnsupportedFeature);
  CHECK_THROWS_AS(parse("int a;", 1), UnsupportedFeature);
}

TEST_CASE("comments are skipped but their lines counted") {
  SourceUnit u = parse("// header\na = 1;\n// middle\nb = 2;\n", 1);
  REQUIRE(u.stmts.size() == 2);
  CHECK(u.stmts[0].line == 2);
  CHECK(u.stmts[1].line == 4);
}

TEST_CASE("point annotations attach to the following statement") {
  SourceUnit u = parse("a = 1;\n// @point:mid\nb = 2;\n", 1);
  REQUIRE(u.stmts.size() == 2);
  CHECK(u.stmts[0].points.empty());
  REQUIRE(u.stmts[1].points.size() == 1);
  CHECK(u.stmts[1].points[0] == "mid");
}

TEST_CASE("reserved point names are rejected") {
  CHECK_THROWS_AS(parse("// @point:exit\na = 1;\n", 1), SyntaxError);
}

TEST_CASE("two statements on one line are rejected") {
  CHECK_THROWS_AS(parse("a = 1; b = 2;", 1), SyntaxError);
  // Different nesting levels may share a line; the if head owns the line.
  CHECK_THROWS_AS(parse("if (a > 0) { b = 1; }", 1), SyntaxError);
}

TEST_CASE("empty program") {
  SourceUnit u = parse("", 1);
  CHECK(u.stmts.empty());
  CHECK(pretty(u).empty());
}

TEST_CASE("pretty round-trips the running example") {
  for (const char* name : {"fig1/v1.mini", "fig1/v2.mini", "fig1/v3.mini"}) {
    SourceUnit u = parse(test::slurp(test::testdata(name)), 1);
    SourceUnit again = parse(pretty(u), 1);
    CHECK(unit_equal(u, again));
  }
}

TEST_CASE("pretty round-trips generated programs") {
  test::Rng rng(4242);
  for (int i = 0; i < 200; ++i) {
    std::string text = test::generate_program(rng);
    SourceUnit u = parse(text, 1);
    SourceUnit again = parse(pretty(u), 1);
    CHECK(unit_equal(u, again));
  }
}

TEST_CASE("line numbers strictly increase per nesting level") {
  test::Rng rng(515);
  for (int i = 0; i < 50; ++i) {
    SourceUnit u = parse(test::generate_program(rng), 1);
    std::function<void(const std::vector<Stmt>&)> walk = [&](const std::vector<Stmt>& stmts) {
      for (size_t k = 1; k < stmts.size(); ++k) CHECK(stmts[k - 1].line < stmts[k].line);
      for (const auto& s : stmts) {
        walk(s.body);
        walk(s.else_body);
      }
    };
    walk(u.stmts);
  }
}

TEST_CASE("parsing is deterministic") {
  std::string text = test::slurp(test::testdata("fig1/v3.mini"));
  SourceUnit a = parse(text, 1);
  SourceUnit b = parse(text, 1);
  CHECK(unit_equal(a, b));
  CHECK(pretty(a) == pretty(b));
}

TEST_CASE("crlf input is accepted") {
  SourceUnit u = parse("a = 1;\r\nb = 2;\r\n", 1);
  REQUIRE(u.stmts.size() == 2);
  CHECK(u.lines.size() == 2);
  CHECK(u.lines[0] == "a = 1;");
}
