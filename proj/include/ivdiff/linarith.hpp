// linarith.hpp — decision procedures over exact rationals: satisfiability of
// linear constraint conjunctions (Fourier-Motzkin), validity of a condition
// under a context, and solving for linear template parameters.
#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ivdiff/symexpr.hpp"

namespace ivdiff {

enum class SatResult { Sat, Unsat, Unknown };
enum class Verdict { Valid, Invalid, Unknown };

// Satisfiability of the conjunction over rational assignments of all atoms.
// Exact for linear systems (with disequality splitting); a nonlinear member
// degrades the positive answer to Unknown, but a refutation found in the
// linear part still yields Unsat.
SatResult lin_sat(std::span<const SymCond> conds);

// Valid   iff ctx implies c for every rational assignment.
// Invalid iff ctx implies the negation of c.
// Complete for linear conjunctions; ground comparisons always decided.
Verdict check_valid(const SymCond& c, std::span<const SymCond> ctx);

std::string render_verdict(Verdict v);

// One per-path instance of a template equation: `concrete = rhs`, where rhs
// contains parameter atoms linearly.
struct ParamEquation {
  SymExpr concrete;
  SymExpr rhs;

  friend bool operator==(const ParamEquation&, const ParamEquation&) = default;
};

// Rational assignment of the parameters making every equation an identity,
// coefficient-wise over monomials. Underdetermined systems pin free
// parameters to zero (Gaussian elimination, parameters pivoted in index
// order, rows in monomial order). Returns nullopt when inconsistent.
std::optional<std::map<int, Rat>> solve_params(std::span<const ParamEquation> equations);

}  // namespace ivdiff
