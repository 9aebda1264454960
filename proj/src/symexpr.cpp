#include "ivdiff/symexpr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace ivdiff {

std::string Atom::render() const {
  switch (kind) {
    case Kind::Input:
      return "input_" + std::to_string(index);
    case Kind::Var:
      return name;
    case Kind::Param:
      return "?" + std::to_string(index);
  }
  return "?";
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& [a, e] : factors) d += e;
  return d;
}

bool operator<(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  return a.factors < b.factors;
}

SymExpr SymExpr::constant(const Rat& c) {
  SymExpr e;
  if (c != 0) e.terms_[Monomial{}] = c;
  return e;
}

SymExpr SymExpr::atom(const Atom& a) {
  SymExpr e;
  e.terms_[Monomial{{{a, 1}}}] = Rat(1);
  return e;
}

void SymExpr::add_term(const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

SymExpr SymExpr::operator+(const SymExpr& o) const {
  SymExpr r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

SymExpr SymExpr::operator-(const SymExpr& o) const {
  SymExpr r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

SymExpr SymExpr::operator-() const {
  SymExpr r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

namespace {
Monomial mul_monomials(const Monomial& a, const Monomial& b) {
  Monomial r;
  auto ia = a.factors.begin(), ib = b.factors.begin();
  while (ia != a.factors.end() || ib != b.factors.end()) {
    if (ib == b.factors.end() || (ia != a.factors.end() && ia->first < ib->first)) {
      r.factors.push_back(*ia++);
    } else if (ia == a.factors.end() || ib->first < ia->first) {
      r.factors.push_back(*ib++);
    } else {
      r.factors.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return r;
}
}  // namespace

SymExpr SymExpr::operator*(const SymExpr& o) const {
  SymExpr r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(mul_monomials(ma, mb), ca * cb);
  return r;
}

std::optional<SymExpr> SymExpr::divide(const SymExpr& divisor) const {
  auto c = divisor.constant_value();
  if (!c || *c == 0) return std::nullopt;
  SymExpr r;
  for (const auto& [m, k] : terms_) r.terms_.emplace(m, k / *c);
  return r;
}

std::pair<SymExpr, bool> SymExpr::substitute(const std::string& var, const SymExpr& repl) const {
  Atom target = Atom::var(var);
  bool changed = false;
  SymExpr r;
  for (const auto& [m, c] : terms_) {
    int exp = 0;
    Monomial rest;
    for (const auto& [a, e] : m.factors) {
      if (a == target) {
        exp = e;
      } else {
        rest.factors.emplace_back(a, e);
      }
    }
    if (exp == 0) {
      r.add_term(m, c);
      continue;
    }
    changed = true;
    SymExpr term;
    term.terms_.emplace(rest, c);
    for (int i = 0; i < exp; ++i) term = term * repl;
    for (const auto& [tm, tc] : term.terms_) r.add_term(tm, tc);
  }
  return {r, changed};
}

bool SymExpr::contains_var(const std::string& var) const {
  Atom target = Atom::var(var);
  for (const auto& [m, c] : terms_)
    for (const auto& [a, e] : m.factors)
      if (a == target) return true;
  return false;
}

bool SymExpr::has_var_atoms() const {
  for (const auto& [m, c] : terms_)
    for (const auto& [a, e] : m.factors)
      if (a.kind == Atom::Kind::Var) return true;
  return false;
}

bool SymExpr::has_param_atoms() const {
  for (const auto& [m, c] : terms_)
    for (const auto& [a, e] : m.factors)
      if (a.kind == Atom::Kind::Param) return true;
  return false;
}

bool SymExpr::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

std::optional<Rat> SymExpr::constant_value() const {
  if (terms_.empty()) return Rat(0);
  if (terms_.size() == 1 && terms_.begin()->first.is_constant()) return terms_.begin()->second;
  return std::nullopt;
}

int SymExpr::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

int SymExpr::degree_without_params() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int md = 0;
    for (const auto& [a, e] : m.factors)
      if (a.kind != Atom::Kind::Param) md += e;
    d = std::max(d, md);
  }
  return d;
}

const Rat* SymExpr::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? nullptr : &it->second;
}

Rat SymExpr::eval(const std::map<Atom, Rat>& assignment) const {
  Rat sum(0);
  for (const auto& [m, c] : terms_) {
    Rat term = c;
    for (const auto& [a, e] : m.factors) {
      auto it = assignment.find(a);
      Rat v = it == assignment.end() ? Rat(0) : it->second;
      for (int i = 0; i < e; ++i) term *= v;
    }
    sum += term;
  }
  return sum;
}

std::string render_rat(const Rat& r) {
  std::ostringstream os;
  if (denominator(r) == 1) {
    os << numerator(r);
  } else {
    os << "(" << numerator(r) << "/" << denominator(r) << ")";
  }
  return os.str();
}

std::string SymExpr::render() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rat a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    if (m.is_constant()) {
      os << render_rat(a);
      continue;
    }
    if (a != 1) os << render_rat(a) << "*";
    bool first_factor = true;
    for (const auto& [atom, e] : m.factors) {
      if (!first_factor) os << "*";
      first_factor = false;
      os << atom.render();
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

Rel negate_rel(Rel r) {
  switch (r) {
    case Rel::Eq:
      return Rel::Ne;
    case Rel::Ne:
      return Rel::Eq;
    case Rel::Gt:
      return Rel::Le;
    case Rel::Lt:
      return Rel::Ge;
    case Rel::Ge:
      return Rel::Lt;
    case Rel::Le:
      return Rel::Gt;
  }
  return Rel::Eq;
}

std::string render_rel(Rel r) {
  switch (r) {
    case Rel::Eq:
      return "=";
    case Rel::Ne:
      return "!=";
    case Rel::Gt:
      return ">";
    case Rel::Lt:
      return "<";
    case Rel::Ge:
      return ">=";
    case Rel::Le:
      return "<=";
  }
  return "=";
}

std::pair<SymCond, bool> SymCond::substitute(const std::string& var, const SymExpr& repl) const {
  auto [l, cl] = lhs.substitute(var, repl);
  auto [r, cr] = rhs.substitute(var, repl);
  return {SymCond{std::move(l), rel, std::move(r)}, cl || cr};
}

bool SymCond::evaluate(const std::map<Atom, Rat>& assignment) const {
  Rat d = diff().eval(assignment);
  switch (rel) {
    case Rel::Eq:
      return d == 0;
    case Rel::Ne:
      return d != 0;
    case Rel::Gt:
      return d > 0;
    case Rel::Lt:
      return d < 0;
    case Rel::Ge:
      return d >= 0;
    case Rel::Le:
      return d <= 0;
  }
  return false;
}

std::string SymCond::render() const {
  return lhs.render() + " " + render_rel(rel) + " " + rhs.render();
}

bool operator<(const SymCond& a, const SymCond& b) {
  if (a.lhs != b.lhs) return a.lhs < b.lhs;
  if (a.rel != b.rel) return a.rel < b.rel;
  return a.rhs < b.rhs;
}

}  // namespace ivdiff
