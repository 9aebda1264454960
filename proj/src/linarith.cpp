#include "ivdiff/linarith.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace ivdiff {

namespace {

// Normalized linear constraint: expr REL 0 with REL in {=, <=, <, !=}.
struct LinCon {
  enum class Kind { Eq, Le, Lt, Ne };
  Kind kind;
  std::map<Atom, Rat> coeffs;
  Rat constant;

  bool ground() const { return coeffs.empty(); }
  bool holds_ground() const {
    switch (kind) {
      case Kind::Eq:
        return constant == 0;
      case Kind::Le:
        return constant <= 0;
      case Kind::Lt:
        return constant < 0;
      case Kind::Ne:
        return constant != 0;
    }
    return false;
  }
};

// Splits a condition into normalized constraints; nullopt marks a nonlinear
// condition that the linear core cannot represent.
std::optional<LinCon> normalize(const SymCond& c) {
  SymExpr d = c.diff();
  if (d.degree() > 1) return std::nullopt;
  LinCon lc;
  switch (c.rel) {
    case Rel::Eq:
      lc.kind = LinCon::Kind::Eq;
      break;
    case Rel::Ne:
      lc.kind = LinCon::Kind::Ne;
      break;
    case Rel::Le:
      lc.kind = LinCon::Kind::Le;
      break;
    case Rel::Lt:
      lc.kind = LinCon::Kind::Lt;
      break;
    case Rel::Ge:  // d >= 0  <=>  -d <= 0
      lc.kind = LinCon::Kind::Le;
      d = -d;
      break;
    case Rel::Gt:
      lc.kind = LinCon::Kind::Lt;
      d = -d;
      break;
  }
  for (const auto& [m, coeff] : d.terms()) {
    if (m.is_constant()) {
      lc.constant = coeff;
    } else {
      lc.coeffs[m.factors[0].first] = coeff;
    }
  }
  return lc;
}

// Substitutes atom := expr (given as coeffs/constant) into target.
void substitute_atom(LinCon& target, const Atom& atom, const std::map<Atom, Rat>& repl_coeffs,
                     const Rat& repl_const) {
  auto it = target.coeffs.find(atom);
  if (it == target.coeffs.end()) return;
  Rat factor = it->second;
  target.coeffs.erase(it);
  target.constant += factor * repl_const;
  for (const auto& [a, c] : repl_coeffs) {
    target.coeffs[a] += factor * c;
    if (target.coeffs[a] == 0) target.coeffs.erase(a);
  }
}

// Fourier-Motzkin over {=, <=, <}. Exact for rationals.
SatResult fm_sat(std::vector<LinCon> cons) {
  // Equalities first: use each to eliminate one atom.
  for (size_t i = 0; i < cons.size(); ++i) {
    if (cons[i].kind != LinCon::Kind::Eq) continue;
    if (cons[i].ground()) {
      if (!cons[i].holds_ground()) return SatResult::Unsat;
      continue;
    }
    Atom pivot = cons[i].coeffs.begin()->first;
    Rat pc = cons[i].coeffs.begin()->second;
    // pivot = -(rest + constant)/pc
    std::map<Atom, Rat> repl;
    for (const auto& [a, c] : cons[i].coeffs)
      if (!(a == pivot)) repl[a] = -c / pc;
    Rat repl_const = -cons[i].constant / pc;
    for (size_t j = 0; j < cons.size(); ++j) {
      if (j == i) continue;
      substitute_atom(cons[j], pivot, repl, repl_const);
    }
    cons[i].coeffs.clear();
    cons[i].constant = Rat(0);
  }

  std::vector<LinCon> ineqs;
  for (auto& c : cons) {
    if (c.ground()) {
      if (!c.holds_ground()) return SatResult::Unsat;
    } else {
      ineqs.push_back(std::move(c));
    }
  }

  // Eliminate atoms one at a time.
  while (true) {
    std::set<Atom> atoms;
    for (const auto& c : ineqs)
      for (const auto& [a, k] : c.coeffs) atoms.insert(a);
    if (atoms.empty()) break;
    Atom x = *atoms.begin();

    std::vector<LinCon> lower, upper, rest;
    for (auto& c : ineqs) {
      auto it = c.coeffs.find(x);
      if (it == c.coeffs.end()) {
        rest.push_back(std::move(c));
      } else if (it->second > 0) {
        upper.push_back(std::move(c));  // k*x + r <= 0, k > 0  =>  x <= -r/k
      } else {
        lower.push_back(std::move(c));
      }
    }
    for (const auto& lo : lower) {
      for (const auto& up : upper) {
        Rat kl = -lo.coeffs.at(x);  // positive
        Rat ku = up.coeffs.at(x);   // positive
        // lo: -kl*x + rl (<=|<) 0  =>  rl/kl (<=|<) x
        // up:  ku*x + ru (<=|<) 0  =>  x (<=|<) -ru/ku
        // combined: rl/kl (<|<=) -ru/ku  =>  rl*ku + ru*kl (<|<=) 0
        LinCon combined;
        combined.kind = (lo.kind == LinCon::Kind::Lt || up.kind == LinCon::Kind::Lt)
                            ? LinCon::Kind::Lt
                            : LinCon::Kind::Le;
        combined.constant = lo.constant * ku + up.constant * kl;
        for (const auto& [a, c] : lo.coeffs)
          if (!(a == x)) combined.coeffs[a] += c * ku;
        for (const auto& [a, c] : up.coeffs)
          if (!(a == x)) combined.coeffs[a] += c * kl;
        for (auto it = combined.coeffs.begin(); it != combined.coeffs.end();)
          it = it->second == 0 ? combined.coeffs.erase(it) : std::next(it);
        if (combined.ground()) {
          if (!combined.holds_ground()) return SatResult::Unsat;
        } else {
          rest.push_back(std::move(combined));
        }
      }
    }
    ineqs = std::move(rest);
  }
  for (const auto& c : ineqs)
    if (c.ground() && !c.holds_ground()) return SatResult::Unsat;
  return SatResult::Sat;
}

constexpr int kMaxNeSplits = 10;

SatResult sat_rec(std::vector<LinCon>& cons, bool saw_nonlinear, int ne_budget) {
  for (size_t i = 0; i < cons.size(); ++i) {
    if (cons[i].kind != LinCon::Kind::Ne) continue;
    if (cons[i].ground()) {
      if (!cons[i].holds_ground()) return SatResult::Unsat;
      cons.erase(cons.begin() + i--);
      continue;
    }
    if (ne_budget == 0) return SatResult::Unknown;
    // expr != 0  splits into  expr < 0  or  -expr < 0.
    std::vector<LinCon> left = cons, right = cons;
    left[i].kind = LinCon::Kind::Lt;
    right[i].kind = LinCon::Kind::Lt;
    for (auto& [a, c] : right[i].coeffs) c = -c;
    right[i].constant = -right[i].constant;
    SatResult l = sat_rec(left, saw_nonlinear, ne_budget - 1);
    if (l == SatResult::Sat) return SatResult::Sat;
    SatResult r = sat_rec(right, saw_nonlinear, ne_budget - 1);
    if (r == SatResult::Sat) return SatResult::Sat;
    if (l == SatResult::Unsat && r == SatResult::Unsat) return SatResult::Unsat;
    return SatResult::Unknown;
  }
  SatResult core = fm_sat(cons);
  if (core == SatResult::Unsat) return SatResult::Unsat;
  return saw_nonlinear ? SatResult::Unknown : core;
}

}  // namespace

SatResult lin_sat(std::span<const SymCond> conds) {
  std::vector<LinCon> cons;
  bool saw_nonlinear = false;
  for (const auto& c : conds) {
    auto lc = normalize(c);
    if (!lc) {
      saw_nonlinear = true;
      continue;
    }
    if (lc->ground()) {
      if (!lc->holds_ground()) return SatResult::Unsat;
      continue;
    }
    cons.push_back(std::move(*lc));
  }
  return sat_rec(cons, saw_nonlinear, kMaxNeSplits);
}

Verdict check_valid(const SymCond& c, std::span<const SymCond> ctx) {
  std::vector<SymCond> with_neg(ctx.begin(), ctx.end());
  with_neg.push_back(SymCond{c.lhs, negate_rel(c.rel), c.rhs});
  if (lin_sat(with_neg) == SatResult::Unsat) return Verdict::Valid;

  std::vector<SymCond> with_pos(ctx.begin(), ctx.end());
  with_pos.push_back(c);
  if (lin_sat(with_pos) == SatResult::Unsat) return Verdict::Invalid;

  return Verdict::Unknown;
}

std::string render_verdict(Verdict v) {
  switch (v) {
    case Verdict::Valid:
      return "valid";
    case Verdict::Invalid:
      return "invalid";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<std::map<int, Rat>> solve_params(std::span<const ParamEquation> equations) {
  // Per equation and per param-free monomial, one row of the linear system
  // sum_j A[j]*p_j + b = 0 over the parameters.
  std::set<int> params;
  std::map<std::pair<size_t, Monomial>, std::pair<std::map<int, Rat>, Rat>> rows;
  for (size_t ei = 0; ei < equations.size(); ++ei) {
    SymExpr d = equations[ei].rhs - equations[ei].concrete;
    for (const auto& [m, coeff] : d.terms()) {
      int param = -1;
      Monomial rest;
      for (const auto& [a, e] : m.factors) {
        if (a.kind == Atom::Kind::Param) {
          assert(param == -1 && e == 1 && "parameters must occur linearly");
          param = a.index;
        } else {
          rest.factors.emplace_back(a, e);
        }
      }
      auto& row = rows[{ei, rest}];
      if (param >= 0) {
        params.insert(param);
        row.first[param] += coeff;
      } else {
        row.second += coeff;
      }
    }
  }
  // Collect params mentioned anywhere in rhs templates even if their
  // coefficient column ended up zero, so they get a pinned value.
  for (const auto& eq : equations) {
    for (const auto& [m, coeff] : eq.rhs.terms())
      for (const auto& [a, e] : m.factors)
        if (a.kind == Atom::Kind::Param) params.insert(a.index);
  }

  std::vector<std::pair<std::map<int, Rat>, Rat>> mat;
  for (auto& [key, row] : rows) {
    for (auto it = row.first.begin(); it != row.first.end();)
      it = it->second == 0 ? row.first.erase(it) : std::next(it);
    if (row.first.empty()) {
      if (row.second != 0) return std::nullopt;  // inconsistent ground row
      continue;
    }
    mat.push_back(row);
  }

  // Gaussian elimination; pivoted rows are kept as pc*p + rest + b = 0.
  struct PivotRow {
    int param;
    Rat pc;
    std::map<int, Rat> rest;
    Rat b;
  };
  std::vector<PivotRow> pivots;
  for (int p : params) {
    size_t pivot_row = mat.size();
    for (size_t i = 0; i < mat.size(); ++i) {
      if (mat[i].first.count(p)) {
        pivot_row = i;
        break;
      }
    }
    if (pivot_row == mat.size()) continue;  // free parameter, pinned to 0
    auto row = mat[pivot_row];
    mat.erase(mat.begin() + pivot_row);
    Rat pc = row.first.at(p);
    row.first.erase(p);
    for (auto& [coeffs, b] : mat) {
      auto it = coeffs.find(p);
      if (it == coeffs.end()) continue;
      Rat f = it->second / pc;
      coeffs.erase(it);
      b -= f * row.second;
      for (const auto& [q, c] : row.first) {
        coeffs[q] -= f * c;
        if (coeffs[q] == 0) coeffs.erase(q);
      }
    }
    pivots.push_back(PivotRow{p, pc, std::move(row.first), std::move(row.second)});
  }
  for (const auto& [coeffs, b] : mat) {
    if (coeffs.empty() && b != 0) return std::nullopt;
    if (!coeffs.empty()) return std::nullopt;  // leftover param row: inconsistent elimination
  }

  std::map<int, Rat> solution;
  for (int p : params) solution[p] = Rat(0);
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    Rat acc = it->b;
    for (const auto& [q, c] : it->rest) acc += c * solution.at(q);
    solution[it->param] = -acc / it->pc;
  }
  return solution;
}

}  // namespace ivdiff
