// symexpr.hpp — canonical polynomial expressions over program variables,
// input symbols and template parameters, with exact rational coefficients.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ivdiff {

using Rat = boost::multiprecision::cpp_rational;

// One symbolic unknown. Inputs sort before variables so that rendered
// invariants read like "2 + input_1" and "input_1*input_2".
struct Atom {
  enum class Kind { Input, Var, Param };
  Kind kind = Kind::Var;
  int index = 0;     // Input / Param
  std::string name;  // Var

  static Atom input(int k) { return Atom{Kind::Input, k, {}}; }
  static Atom var(std::string n) { return Atom{Kind::Var, 0, std::move(n)}; }
  static Atom param(int j) { return Atom{Kind::Param, j, {}}; }

  std::string render() const;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Product of atoms with positive exponents, kept sorted by atom.
struct Monomial {
  std::vector<std::pair<Atom, int>> factors;

  int degree() const;
  bool is_constant() const { return factors.empty(); }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Graded order: lower total degree first, then lexicographic on factors.
  friend bool operator<(const Monomial& a, const Monomial& b);
};

// Canonical form: monomial -> nonzero rational coefficient. Two expressions
// denote the same polynomial iff their term maps are identical.
class SymExpr {
 public:
  SymExpr() = default;

  static SymExpr constant(const Rat& c);
  static SymExpr constant(long long c) { return constant(Rat(c)); }
  static SymExpr atom(const Atom& a);
  static SymExpr variable(const std::string& name) { return atom(Atom::var(name)); }
  static SymExpr input(int k) { return atom(Atom::input(k)); }
  static SymExpr param(int j) { return atom(Atom::param(j)); }

  SymExpr operator+(const SymExpr& o) const;
  SymExpr operator-(const SymExpr& o) const;
  SymExpr operator*(const SymExpr& o) const;
  SymExpr operator-() const;
  SymExpr& operator+=(const SymExpr& o) { return *this = *this + o; }

  // Exact division; defined only when the divisor is a nonzero constant.
  std::optional<SymExpr> divide(const SymExpr& divisor) const;

  // Replaces every occurrence of the named variable. The flag reports
  // whether anything changed.
  std::pair<SymExpr, bool> substitute(const std::string& var, const SymExpr& repl) const;

  bool contains_var(const std::string& var) const;
  bool has_var_atoms() const;
  bool has_param_atoms() const;
  // True iff every atom is an input symbol (constants qualify).
  bool is_input_expr() const { return !has_var_atoms() && !has_param_atoms(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::optional<Rat> constant_value() const;  // nullopt unless constant
  int degree() const;
  // Max degree counting only non-Param atoms (Params act as coefficients).
  int degree_without_params() const;

  const std::map<Monomial, Rat>& terms() const { return terms_; }
  const Rat* coeff(const Monomial& m) const;

  Rat eval(const std::map<Atom, Rat>& assignment) const;

  std::string render() const;

  friend bool operator==(const SymExpr&, const SymExpr&) = default;
  friend bool operator<(const SymExpr& a, const SymExpr& b) { return a.terms_ < b.terms_; }

 private:
  void add_term(const Monomial& m, const Rat& c);
  std::map<Monomial, Rat> terms_;
};

enum class Rel { Eq, Ne, Gt, Lt, Ge, Le };

Rel negate_rel(Rel r);
std::string render_rel(Rel r);

// A relation between two symbolic expressions.
struct SymCond {
  SymExpr lhs;
  Rel rel = Rel::Eq;
  SymExpr rhs;

  SymExpr diff() const { return lhs - rhs; }
  std::pair<SymCond, bool> substitute(const std::string& var, const SymExpr& repl) const;
  bool has_var_atoms() const { return lhs.has_var_atoms() || rhs.has_var_atoms(); }
  bool evaluate(const std::map<Atom, Rat>& assignment) const;
  std::string render() const;

  friend bool operator==(const SymCond&, const SymCond&) = default;
  friend bool operator<(const SymCond& a, const SymCond& b);
};

std::string render_rat(const Rat& r);

}  // namespace ivdiff
