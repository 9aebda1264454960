// minilang.hpp — the small imperative language the analysis consumes.
// One implicit top-level procedure per .mini file; statements are
// assignments, `input x;`, `x++;`/`x--;` sugar, if/else and while.
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ivdiff/symexpr.hpp"  // Rel

namespace ivdiff {

struct Expr {
  enum class Kind { IntLit, Var, Unary, Binary };
  Kind kind = Kind::IntLit;
  long long value = 0;      // IntLit
  std::string name;         // Var
  char op = 0;              // Binary: + - * / ; Unary: -
  std::vector<Expr> kids;   // Unary: 1, Binary: 2

  static Expr lit(long long v);
  static Expr var(std::string n);
  static Expr unary(char op, Expr e);
  static Expr binary(char op, Expr l, Expr r);

  std::string render() const;
  void collect_vars(std::vector<std::string>& out) const;
  friend bool operator==(const Expr&, const Expr&);
};

struct CondAst {
  Expr lhs;
  Rel rel = Rel::Eq;
  Expr rhs;

  std::string render() const;
  friend bool operator==(const CondAst&, const CondAst&) = default;
};

struct Stmt {
  enum class Kind { Assign, Input, If, While };
  Kind kind = Kind::Assign;
  int line = 0;
  std::string target;              // Assign / Input
  Expr value;                      // Assign
  CondAst cond;                    // If / While
  std::vector<Stmt> body;          // If then-arm / While body
  std::vector<Stmt> else_body;     // If else-arm
  std::vector<std::string> points; // @point annotations on this statement
};

// Head equality: same statement ignoring nested bodies and line numbers.
bool stmt_head_equal(const Stmt& a, const Stmt& b);
// Deep structural equality (bodies included, lines and points ignored).
bool stmt_equal(const Stmt& a, const Stmt& b);

struct SourceUnit {
  int version_index = 1;
  std::vector<std::string> lines;  // raw source lines
  std::vector<Stmt> stmts;
};

bool unit_equal(const SourceUnit& a, const SourceUnit& b);

struct SyntaxError : std::runtime_error {
  SyntaxError(std::string msg, int line, int column);
  int line;
  int column;
};

struct UnsupportedFeature : SyntaxError {
  using SyntaxError::SyntaxError;
};

SourceUnit parse(std::string_view text, int version_index);

// Canonical rendering; parse(pretty(u)) is structurally equal to u.
std::string pretty(const SourceUnit& unit);

std::vector<std::string> split_lines(std::string_view text);

}  // namespace ivdiff
