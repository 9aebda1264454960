#include <random>

#include "doctest.h"
#include "ivdiff/linarith.hpp"
#include "support/testutil.hpp"

using namespace ivdiff;

namespace {
SymExpr v(const std::string& n) { return SymExpr::variable(n); }
SymExpr c(long long k) { return SymExpr::constant(k); }
}  // namespace

TEST_CASE("ground comparisons are always decided") {
  CHECK(check_valid(SymCond{c(4), Rel::Gt, c(2)}, {}) == Verdict::Valid);
  CHECK(check_valid(SymCond{c(1), Rel::Gt, c(2)}, {}) == Verdict::Invalid);
}

TEST_CASE("branch context decides the incremented candidate") {
  // b > a1 implies b + 1 > a1.
  std::vector<SymCond> ctx{SymCond{v("b"), Rel::Gt, v("a1")}};
  CHECK(check_valid(SymCond{v("b") + c(1), Rel::Gt, v("a1")}, ctx) == Verdict::Valid);
  // And also b + 1 > a1 + 1.
  CHECK(check_valid(SymCond{v("b") + c(1), Rel::Gt, v("a1") + c(1)}, ctx) == Verdict::Valid);
}

TEST_CASE("trivially false over all assignments") {
  CHECK(check_valid(SymCond{v("x"), Rel::Gt, v("x")}, {}) == Verdict::Invalid);
  CHECK(check_valid(SymCond{v("x"), Rel::Ge, v("x")}, {}) == Verdict::Valid);
}

TEST_CASE("contingent conditions come out Unknown") {
  CHECK(check_valid(SymCond{c(3), Rel::Gt, SymExpr::input(1)}, {}) == Verdict::Unknown);
  CHECK(check_valid(SymCond{v("x"), Rel::Gt, v("y")}, {}) == Verdict::Unknown);
}

TEST_CASE("equalities and chained implications") {
  std::vector<SymCond> ctx{SymCond{v("x"), Rel::Eq, v("y") + c(1)},
                           SymCond{v("y"), Rel::Ge, c(0)}};
  CHECK(check_valid(SymCond{v("x"), Rel::Ge, c(1)}, ctx) == Verdict::Valid);
  CHECK(check_valid(SymCond{v("x"), Rel::Lt, c(1)}, ctx) == Verdict::Invalid);
  CHECK(check_valid(SymCond{v("x"), Rel::Ge, c(2)}, ctx) == Verdict::Unknown);
}

TEST_CASE("strictness is tracked through elimination") {
  std::vector<SymCond> ctx{SymCond{v("x"), Rel::Gt, c(0)}, SymCond{v("x"), Rel::Lt, c(1)}};
  CHECK(lin_sat(ctx) == SatResult::Sat);
  std::vector<SymCond> empty_box{SymCond{v("x"), Rel::Gt, c(0)},
                                 SymCond{v("x"), Rel::Le, c(0)}};
  CHECK(lin_sat(empty_box) == SatResult::Unsat);
}

TEST_CASE("disequalities split") {
  std::vector<SymCond> conds{SymCond{v("x"), Rel::Ne, c(0)}, SymCond{v("x"), Rel::Ge, c(0)},
                             SymCond{v("x"), Rel::Le, c(0)}};
  CHECK(lin_sat(conds) == SatResult::Unsat);
  std::vector<SymCond> sat{SymCond{v("x"), Rel::Ne, c(0)}, SymCond{v("x"), Rel::Ge, c(0)}};
  CHECK(lin_sat(sat) == SatResult::Sat);
}

TEST_CASE("nonlinear members degrade to Unknown but refutation still works") {
  std::vector<SymCond> nonlinear{SymCond{v("x") * v("x"), Rel::Ge, c(0)}};
  CHECK(lin_sat(nonlinear) == SatResult::Unknown);
  std::vector<SymCond> with_false{SymCond{v("x") * v("x"), Rel::Ge, c(0)},
                                  SymCond{c(1), Rel::Lt, c(0)}};
  CHECK(lin_sat(with_false) == SatResult::Unsat);
  CHECK(check_valid(SymCond{c(4), Rel::Gt, c(2)}, nonlinear) == Verdict::Valid);
}

TEST_CASE("check_valid soundness against ctx-satisfying samples") {
  test::Rng rng(77);
  std::vector<Atom> atoms = {Atom::var("x"), Atom::var("y"), Atom::input(1)};
  auto random_affine = [&](test::Rng& r) {
    SymExpr e = SymExpr::constant(test::random_rat(r, 4));
    for (const auto& a : atoms)
      if (std::uniform_int_distribution<int>(0, 1)(r))
        e += SymExpr::constant(test::random_rat(r, 3)) * SymExpr::atom(a);
    return e;
  };
  Rel rels[] = {Rel::Gt, Rel::Lt, Rel::Ge, Rel::Le, Rel::Eq};
  int checked = 0;
  for (int iter = 0; iter < 20000 && checked < 1000; ++iter) {
    std::vector<SymCond> ctx;
    int nctx = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < nctx; ++i)
      ctx.push_back(SymCond{random_affine(rng),
                            rels[std::uniform_int_distribution<int>(0, 4)(rng)],
                            random_affine(rng)});
    SymCond cand{random_affine(rng), rels[std::uniform_int_distribution<int>(0, 4)(rng)],
                 random_affine(rng)};
    Verdict verdict = check_valid(cand, ctx);
    if (verdict == Verdict::Unknown) continue;
    for (int s = 0; s < 50; ++s) {
      std::map<Atom, Rat> env;
      for (const auto& a : atoms) env[a] = test::random_rat(rng, 6);
      bool ctx_holds = true;
      for (const auto& cc : ctx) ctx_holds = ctx_holds && cc.evaluate(env);
      if (!ctx_holds) continue;
      ++checked;
      if (verdict == Verdict::Valid) CHECK(cand.evaluate(env));
      if (verdict == Verdict::Invalid) CHECK_FALSE(cand.evaluate(env));
    }
  }
  CHECK(checked >= 1000);
}

TEST_CASE("solve_params: constant candidate agreeing on two paths") {
  // c = ?  with both paths giving 2.
  std::vector<ParamEquation> eqs{{c(2), SymExpr::param(1)}, {c(2), SymExpr::param(1)}};
  auto sol = solve_params(eqs);
  REQUIRE(sol.has_value());
  CHECK(sol->at(1) == Rat(2));
}

TEST_CASE("solve_params: conflicting paths have no solution") {
  // d = ?  with paths giving 2 + input_1 and 3 + input_1.
  std::vector<ParamEquation> eqs{{c(2) + SymExpr::input(1), SymExpr::param(1)},
                                 {c(3) + SymExpr::input(1), SymExpr::param(1)}};
  CHECK_FALSE(solve_params(eqs).has_value());
}

TEST_CASE("solve_params: underdetermined systems pin free parameters to zero") {
  // a = ?*b + ?*c with both paths giving a = 2b: ?1 = 2, ?2 = 0.
  SymExpr rhs = SymExpr::param(1) * v("b") + SymExpr::param(2) * v("c");
  std::vector<ParamEquation> eqs{{c(2) * v("b"), rhs}, {c(2) * v("b"), rhs}};
  auto sol = solve_params(eqs);
  REQUIRE(sol.has_value());
  CHECK(sol->at(1) == Rat(2));
  CHECK(sol->at(2) == Rat(0));
}

TEST_CASE("solve_params: solution substituted back makes equations identities") {
  test::Rng rng(99);
  for (int iter = 0; iter < 100; ++iter) {
    // Build equations y_i = p1*x1_i + p2*x2_i from a hidden (p1, p2).
    Rat p1 = test::random_rat(rng, 5), p2 = test::random_rat(rng, 5);
    std::vector<ParamEquation> eqs;
    int npaths = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < npaths; ++i) {
      SymExpr x1 = SymExpr::input(1) * SymExpr::constant(test::random_rat(rng, 3)) +
                   SymExpr::constant(test::random_rat(rng, 3));
      SymExpr x2 = SymExpr::input(2) * SymExpr::constant(test::random_rat(rng, 3));
      SymExpr y = SymExpr::constant(p1) * x1 + SymExpr::constant(p2) * x2;
      eqs.push_back({y, SymExpr::param(1) * x1 + SymExpr::param(2) * x2});
    }
    auto sol = solve_params(eqs);
    REQUIRE(sol.has_value());
    for (const auto& eq : eqs) {
      SymExpr substituted;
      for (const auto& [m, coeff] : eq.rhs.terms()) {
        SymExpr term = SymExpr::constant(coeff);
        for (const auto& [atom, exp] : m.factors) {
          SymExpr factor =
              atom.kind == Atom::Kind::Param ? SymExpr::constant(sol->at(atom.index))
                                             : SymExpr::atom(atom);
          for (int e = 0; e < exp; ++e) term = term * factor;
        }
        substituted += term;
      }
      CHECK(substituted == eq.concrete);
    }
  }
}
