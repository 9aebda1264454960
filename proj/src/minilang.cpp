#include "ivdiff/minilang.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace ivdiff {

Expr Expr::lit(long long v) {
  Expr e;
  e.kind = Kind::IntLit;
  e.value = v;
  return e;
}

Expr Expr::var(std::string n) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(n);
  return e;
}

Expr Expr::unary(char op, Expr k) {
  Expr e;
  e.kind = Kind::Unary;
  e.op = op;
  e.kids.push_back(std::move(k));
  return e;
}

Expr Expr::binary(char op, Expr l, Expr r) {
  Expr e;
  e.kind = Kind::Binary;
  e.op = op;
  e.kids.push_back(std::move(l));
  e.kids.push_back(std::move(r));
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::IntLit:
      return a.value == b.value;
    case Expr::Kind::Var:
      return a.name == b.name;
    case Expr::Kind::Unary:
      return a.op == b.op && a.kids[0] == b.kids[0];
    case Expr::Kind::Binary:
      return a.op == b.op && a.kids[0] == b.kids[0] && a.kids[1] == b.kids[1];
  }
  return false;
}

namespace {
int precedence(char op) { return (op == '*' || op == '/') ? 2 : 1; }
}  // namespace

std::string Expr::render() const {
  switch (kind) {
    case Kind::IntLit:
      return std::to_string(value);
    case Kind::Var:
      return name;
    case Kind::Unary: {
      std::string inner = kids[0].render();
      if (kids[0].kind == Kind::Binary || kids[0].kind == Kind::Unary) inner = "(" + inner + ")";
      return "-" + inner;
    }
    case Kind::Binary: {
      std::string l = kids[0].render();
      std::string r = kids[1].render();
      if (kids[0].kind == Kind::Binary && precedence(kids[0].op) < precedence(op))
        l = "(" + l + ")";
      // Right operand needs parens on equal precedence too: ops are
      // left-associative.
      if (kids[1].kind == Kind::Binary && precedence(kids[1].op) <= precedence(op))
        r = "(" + r + ")";
      if (kids[1].kind == Kind::Unary) r = "(" + r + ")";
      return l + " " + std::string(1, op) + " " + r;
    }
  }
  return "";
}

void Expr::collect_vars(std::vector<std::string>& out) const {
  switch (kind) {
    case Kind::Var:
      out.push_back(name);
      break;
    case Kind::Unary:
    case Kind::Binary:
      for (const auto& k : kids) k.collect_vars(out);
      break;
    default:
      break;
  }
}

std::string CondAst::render() const {
  return lhs.render() + " " + (rel == Rel::Eq ? "==" : render_rel(rel)) + " " + rhs.render();
}

bool stmt_head_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Stmt::Kind::Assign:
      return a.target == b.target && a.value == b.value;
    case Stmt::Kind::Input:
      return a.target == b.target;
    case Stmt::Kind::If:
    case Stmt::Kind::While:
      return a.cond == b.cond;
  }
  return false;
}

namespace {
bool stmt_list_equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!stmt_equal(a[i], b[i])) return false;
  return true;
}
}  // namespace

bool stmt_equal(const Stmt& a, const Stmt& b) {
  return stmt_head_equal(a, b) && stmt_list_equal(a.body, b.body) &&
         stmt_list_equal(a.else_body, b.else_body);
}

bool unit_equal(const SourceUnit& a, const SourceUnit& b) {
  return stmt_list_equal(a.stmts, b.stmts);
}

SyntaxError::SyntaxError(std::string msg, int line, int column)
    : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                         std::to_string(column)),
      line(line),
      column(column) {}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(std::move(cur));
  }
  return lines;
}

namespace {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  long long value = 0;
  int line = 1;
  int column = 1;
};

const std::set<std::string> kUnsupportedKeywords = {
    "for", "do",    "switch", "return", "break",  "continue", "int",  "float", "double",
    "cin", "cout",  "void",   "char",   "string", "struct",   "case", "goto",  "long",
    "bool"};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  // Point annotations seen since the previous statement boundary.
  std::vector<std::string> take_pending_points() {
    auto r = std::move(pending_points_);
    pending_points_.clear();
    return r;
  }

 private:
  void advance() {
    skip_ws_and_comments();
    tok_ = Token{};
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        bump();
      tok_.kind = Token::Kind::Ident;
      tok_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) bump();
      tok_.kind = Token::Kind::Int;
      tok_.text = std::string(text_.substr(start, pos_ - start));
      try {
        tok_.value = std::stoll(tok_.text);
      } catch (const std::out_of_range&) {
        throw SyntaxError("integer literal out of range", tok_.line, tok_.column);
      }
      return;
    }
    // Multi-char punctuation first.
    static const char* two_char[] = {"==", "!=", ">=", "<=", "++", "--"};
    for (const char* p : two_char) {
      if (text_.substr(pos_, 2) == p) {
        tok_.kind = Token::Kind::Punct;
        tok_.text = p;
        bump();
        bump();
        return;
      }
    }
    static const std::string singles = "=+-*/<>(){};!";
    if (singles.find(c) != std::string::npos) {
      tok_.kind = Token::Kind::Punct;
      tok_.text = std::string(1, c);
      bump();
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  void skip_ws_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
        std::string comment(text_.substr(start, pos_ - start));
        size_t at = comment.find("@point:");
        if (at != std::string::npos) {
          size_t name_start = at + 7;
          size_t name_end = name_start;
          while (name_end < comment.size() &&
                 (std::isalnum(static_cast<unsigned char>(comment[name_end])) ||
                  comment[name_end] == '_'))
            ++name_end;
          std::string name = comment.substr(name_start, name_end - name_start);
          if (name.empty())
            throw SyntaxError("empty @point name", line_, col_);
          if (name == "entry" || name == "exit")
            throw SyntaxError("reserved point name '" + name + "'", line_, col_);
          pending_points_.push_back(name);
        }
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
  std::vector<std::string> pending_points_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  std::vector<Stmt> parse_program() {
    std::vector<Stmt> stmts = parse_stmt_list(/*top_level=*/true);
    if (lex_.peek().kind != Token::Kind::End)
      throw error("expected statement or end of input");
    return stmts;
  }

 private:
  SyntaxError error(const std::string& msg) const {
    const Token& t = lex_.peek();
    std::string got = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    return SyntaxError(msg + ", got " + got, t.line, t.column);
  }

  bool peek_punct(const std::string& p) const {
    return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p;
  }

  void expect_punct(const std::string& p) {
    if (!peek_punct(p)) throw error("expected '" + p + "'");
    lex_.next();
  }

  std::vector<Stmt> parse_stmt_list(bool top_level) {
    std::vector<Stmt> stmts;
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Kind::End) {
        if (!top_level) throw error("expected '}'");
        break;
      }
      if (peek_punct("}")) {
        if (top_level) throw error("unmatched '}'");
        break;
      }
      stmts.push_back(parse_stmt());
    }
    return stmts;
  }

  Stmt parse_stmt() {
    std::vector<std::string> points = lex_.take_pending_points();
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::Ident) throw error("expected statement");
    if (kUnsupportedKeywords.count(t.text))
      throw UnsupportedFeature("unsupported construct '" + t.text + "'", t.line, t.column);

    // One statement per line keeps line-based diffs and matching unambiguous.
    if (t.line <= last_stmt_line_)
      throw SyntaxError("statement must start on its own line", t.line, t.column);
    last_stmt_line_ = t.line;

    Stmt s;
    s.points = std::move(points);
    s.line = t.line;
    if (t.text == "input") {
      lex_.next();
      s.kind = Stmt::Kind::Input;
      s.target = expect_ident("expected variable after 'input'");
      expect_punct(";");
      return s;
    }
    if (t.text == "if") {
      lex_.next();
      s.kind = Stmt::Kind::If;
      expect_punct("(");
      s.cond = parse_cond();
      expect_punct(")");
      expect_punct("{");
      s.body = parse_stmt_list(false);
      expect_punct("}");
      if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "else") {
        lex_.next();
        expect_punct("{");
        s.else_body = parse_stmt_list(false);
        expect_punct("}");
      }
      return s;
    }
    if (t.text == "while") {
      lex_.next();
      s.kind = Stmt::Kind::While;
      expect_punct("(");
      s.cond = parse_cond();
      expect_punct(")");
      expect_punct("{");
      s.body = parse_stmt_list(false);
      expect_punct("}");
      return s;
    }
    // Assignment or increment/decrement sugar.
    std::string name = expect_ident("expected statement");
    s.kind = Stmt::Kind::Assign;
    s.target = name;
    if (peek_punct("++") || peek_punct("--")) {
      char op = lex_.next().text[0];
      s.value = Expr::binary(op == '+' ? '+' : '-', Expr::var(name), Expr::lit(1));
      expect_punct(";");
      return s;
    }
    expect_punct("=");
    s.value = parse_expr();
    expect_punct(";");
    return s;
  }

  std::string expect_ident(const std::string& msg) {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::Ident) throw error(msg);
    if (kUnsupportedKeywords.count(t.text))
      throw UnsupportedFeature("unsupported construct '" + t.text + "'", t.line, t.column);
    if (t.text == "if" || t.text == "else" || t.text == "while" || t.text == "input")
      throw error(msg);
    return lex_.next().text;
  }

  CondAst parse_cond() {
    CondAst c;
    c.lhs = parse_expr();
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::Punct) throw error("expected relational operator");
    if (t.text == "==")
      c.rel = Rel::Eq;
    else if (t.text == "!=")
      c.rel = Rel::Ne;
    else if (t.text == ">")
      c.rel = Rel::Gt;
    else if (t.text == "<")
      c.rel = Rel::Lt;
    else if (t.text == ">=")
      c.rel = Rel::Ge;
    else if (t.text == "<=")
      c.rel = Rel::Le;
    else if (t.text == "=")
      throw error("expected relational operator ('==' for equality)");
    else
      throw error("expected relational operator");
    lex_.next();
    c.rhs = parse_expr();
    return c;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    while (peek_punct("+") || peek_punct("-")) {
      char op = lex_.next().text[0];
      e = Expr::binary(op, std::move(e), parse_term());
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (peek_punct("*") || peek_punct("/")) {
      char op = lex_.next().text[0];
      e = Expr::binary(op, std::move(e), parse_factor());
    }
    return e;
  }

  Expr parse_factor() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Int) return Expr::lit(lex_.next().value);
    if (t.kind == Token::Kind::Ident) {
      if (kUnsupportedKeywords.count(t.text))
        throw UnsupportedFeature("unsupported construct '" + t.text + "'", t.line, t.column);
      return Expr::var(lex_.next().text);
    }
    if (peek_punct("(")) {
      lex_.next();
      Expr e = parse_expr();
      expect_punct(")");
      return e;
    }
    if (peek_punct("-")) {
      lex_.next();
      return Expr::unary('-', parse_factor());
    }
    throw error("expected expression");
  }

  Lexer lex_;
  int last_stmt_line_ = 0;
};

void pretty_stmts(const std::vector<Stmt>& stmts, int indent, std::ostringstream& os) {
  std::string pad(indent, ' ');
  for (const Stmt& s : stmts) {
    for (const auto& p : s.points) os << pad << "// @point:" << p << "\n";
    switch (s.kind) {
      case Stmt::Kind::Assign:
        os << pad << s.target << " = " << s.value.render() << ";\n";
        break;
      case Stmt::Kind::Input:
        os << pad << "input " << s.target << ";\n";
        break;
      case Stmt::Kind::If:
        os << pad << "if (" << s.cond.render() << ") {\n";
        pretty_stmts(s.body, indent + 2, os);
        if (s.else_body.empty()) {
          os << pad << "}\n";
        } else {
          os << pad << "} else {\n";
          pretty_stmts(s.else_body, indent + 2, os);
          os << pad << "}\n";
        }
        break;
      case Stmt::Kind::While:
        os << pad << "while (" << s.cond.render() << ") {\n";
        pretty_stmts(s.body, indent + 2, os);
        os << pad << "}\n";
        break;
    }
  }
}

}  // namespace

SourceUnit parse(std::string_view text, int version_index) {
  SourceUnit unit;
  unit.version_index = version_index;
  unit.lines = split_lines(text);
  Parser parser(text);
  unit.stmts = parser.parse_program();
  return unit;
}

std::string pretty(const SourceUnit& unit) {
  std::ostringstream os;
  pretty_stmts(unit.stmts, 0, os);
  return os.str();
}

}  // namespace ivdiff
