#include "etaflat/parse.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace etaflat {

ParseError::ParseError(Kind kind, int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " +
                         (kind == Kind::Lexical ? "lexical error: " : "syntax error: ") + message),
      kind_(kind),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  Ident,
  Int,
  True,
  False,
  If,
  Then,
  Else,
  KwInt,
  KwRat,
  KwBool,
  Backslash,
  Dot,
  LParen,
  RParen,
  Comma,
  Colon,
  Arrow,
  Star,
  Plus,
  Minus,
  Lt,
  Slash,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Lexer {
 public:
  Lexer(std::string_view src, ParseOptions opts) : src_(src), opts_(opts) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        lex_word(t);
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_int(t);
      } else {
        lex_punct(t, c);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(int line, int col, const std::string& msg) const {
    throw ParseError(ParseError::Kind::Lexical, line, col, msg);
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_word(Token& t) {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      advance();
    t.text = std::string(src_.substr(start, pos_ - start));
    static const std::pair<std::string_view, Tok> keywords[] = {
        {"True", Tok::True}, {"False", Tok::False}, {"if", Tok::If},     {"then", Tok::Then},
        {"else", Tok::Else}, {"int", Tok::KwInt},   {"rat", Tok::KwRat}, {"bool", Tok::KwBool},
    };
    for (const auto& [word, kind] : keywords) {
      if (t.text == word) {
        t.kind = kind;
        return;
      }
    }
    if (t.text[0] == '_') {
      if (!is_generated_ident(t.text)) fail(t.line, t.column, "invalid identifier '" + t.text + "'");
      if (!opts_.allow_generated)
        fail(t.line, t.column, "identifier '" + t.text + "' uses the reserved prefix _eta_");
    } else if (t.text.rfind(kGeneratedPrefix, 0) == 0) {
      fail(t.line, t.column, "identifier '" + t.text + "' uses the reserved prefix _eta_");
    }
    t.kind = Tok::Ident;
  }

  void lex_int(Token& t) {
    std::size_t start = pos_;
    advance();
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    t.text = std::string(src_.substr(start, pos_ - start));
    if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      fail(line_, col_, "identifier may not start with a digit");
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      fail(t.line, t.column, "integer literal out of range '" + t.text + "'");
    t.kind = Tok::Int;
  }

  void lex_punct(Token& t, char c) {
    t.text = std::string(1, c);
    switch (c) {
      case '\\': t.kind = Tok::Backslash; break;
      case '.': t.kind = Tok::Dot; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case ',': t.kind = Tok::Comma; break;
      case ':': t.kind = Tok::Colon; break;
      case '*': t.kind = Tok::Star; break;
      case '+': t.kind = Tok::Plus; break;
      case '<': t.kind = Tok::Lt; break;
      case '/': t.kind = Tok::Slash; break;
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          advance();
          t.text = "->";
          t.kind = Tok::Arrow;
        } else {
          t.kind = Tok::Minus;
        }
        break;
      default:
        fail(t.line, t.column, std::string("unexpected character '") + c + "'");
    }
    advance();
  }

  std::string_view src_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expr whole_expr() {
    Expr e = expr();
    expect(Tok::End, "end of input");
    return e;
  }

  Type whole_type() {
    Type t = type();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(ParseError::Kind::Syntax, t.line, t.column, msg);
  }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(peek(), std::string("expected ") + what + ", found " + describe(peek()));
    return take();
  }

  // type := prodty ('->' type)?
  Type type() {
    Type lhs = prod_type();
    if (at(Tok::Arrow)) {
      take();
      return Type::arr(lhs, type());
    }
    return lhs;
  }

  // prodty := atomty ('*' atomty)*
  Type prod_type() {
    Type t = atom_type();
    while (at(Tok::Star)) {
      take();
      t = Type::prod(t, atom_type());
    }
    return t;
  }

  Type atom_type() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwInt: take(); return Type::int_();
      case Tok::KwRat: take(); return Type::rat();
      case Tok::KwBool: take(); return Type::bool_();
      case Tok::LParen: {
        take();
        Type inner = type();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail(t, "expected a type, found " + describe(t));
    }
  }

  // expr := '\' IDENT '.' expr | 'if' expr 'then' expr 'else' expr | cmp (':' type)?
  Expr expr() {
    if (at(Tok::Backslash)) {
      take();
      Token x = expect(Tok::Ident, "binder name");
      expect(Tok::Dot, "'.'");
      return Expr::lam(x.text, expr());
    }
    if (at(Tok::If)) {
      take();
      Expr c = expr();
      expect(Tok::Then, "'then'");
      Expr a = expr();
      expect(Tok::Else, "'else'");
      Expr b = expr();
      return Expr::if_(c, a, b);
    }
    Expr e = cmp();
    if (at(Tok::Colon)) {
      take();
      return Expr::anno(e, type());
    }
    return e;
  }

  Expr cmp() {
    Expr lhs = add();
    if (at(Tok::Lt)) {
      take();
      return Expr::binop(BinOpKind::Lt, lhs, add());
    }
    return lhs;
  }

  Expr add() {
    Expr e = mul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOpKind op = take().kind == Tok::Plus ? BinOpKind::Add : BinOpKind::Sub;
      e = Expr::binop(op, e, mul());
    }
    return e;
  }

  Expr mul() {
    Expr e = app();
    while (at(Tok::Slash)) {
      take();
      e = Expr::binop(BinOpKind::Div, e, app());
    }
    return e;
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::Int:
      case Tok::True:
      case Tok::False:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Expr app() {
    if (!starts_atom()) fail(peek(), "expected an expression, found " + describe(peek()));
    Expr e = atom();
    while (starts_atom()) e = Expr::app(e, atom());
    return e;
  }

  Expr atom() {
    Expr e = primary();
    while (at(Tok::Dot)) {
      take();
      const Token& k = peek();
      if (k.kind != Tok::Int || (k.value != 1 && k.value != 2))
        fail(k, "projection index must be 1 or 2, found " + describe(k));
      take();
      e = Expr::proj(static_cast<int>(k.value), e);
    }
    return e;
  }

  Expr primary() {
    Token t = take();
    switch (t.kind) {
      case Tok::Ident: return Expr::var(t.text);
      case Tok::Int: return Expr::int_lit(t.value);
      case Tok::True: return Expr::bool_lit(true);
      case Tok::False: return Expr::bool_lit(false);
      case Tok::LParen: {
        Expr first = expr();
        if (at(Tok::Comma)) {
          take();
          Expr second = expr();
          expect(Tok::RParen, "')'");
          return Expr::pair(first, second);
        }
        expect(Tok::RParen, "')'");
        return first;
      }
      default:
        fail(t, "expected an expression, found " + describe(t));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Precedence levels, loosest first.
enum Level { kExpr = 0, kCmp = 1, kAdd = 2, kMul = 3, kApp = 4, kAtom = 5 };

void print_type(const Type& t, int need, std::string& out) {
  int own = t.is(TypeKind::Arr) ? 0 : t.is(TypeKind::Prod) ? 1 : 2;
  bool paren = own < need;
  if (paren) out += '(';
  switch (t.kind()) {
    case TypeKind::Int: out += "int"; break;
    case TypeKind::Rat: out += "rat"; break;
    case TypeKind::Bool: out += "bool"; break;
    case TypeKind::Arr:
      print_type(t.domain(), 1, out);
      out += " -> ";
      print_type(t.codomain(), 0, out);
      break;
    case TypeKind::Prod:
      print_type(t.left(), 1, out);
      out += " * ";
      print_type(t.right(), 2, out);
      break;
  }
  if (paren) out += ')';
}

int level_of(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Lam:
    case ExprKind::If:
    case ExprKind::Anno:
      return kExpr;
    case ExprKind::BinOp:
      switch (e.op()) {
        case BinOpKind::Lt: return kCmp;
        case BinOpKind::Add:
        case BinOpKind::Sub: return kAdd;
        case BinOpKind::Div: return kMul;
      }
      return kAdd;
    case ExprKind::App:
      return kApp;
    default:
      return kAtom;
  }
}

void print_expr(const Expr& e, int need, std::string& out) {
  bool paren = level_of(e) < need;
  if (paren) out += '(';
  switch (e.kind()) {
    case ExprKind::Var:
      out += e.name();
      break;
    case ExprKind::Lam:
      out += '\\';
      out += e.name();
      out += ". ";
      print_expr(e.body(), kExpr, out);
      break;
    case ExprKind::App:
      print_expr(e.fn(), kApp, out);
      out += ' ';
      print_expr(e.arg(), kAtom, out);
      break;
    case ExprKind::Anno:
      print_expr(e.subject(), kCmp, out);
      out += " : ";
      print_type(e.annotation(), 0, out);
      break;
    case ExprKind::IntLit:
      out += std::to_string(e.int_value());
      break;
    case ExprKind::BinOp: {
      int lhs = kAdd, rhs = kAdd;
      if (e.op() == BinOpKind::Add || e.op() == BinOpKind::Sub) rhs = kMul;
      if (e.op() == BinOpKind::Div) lhs = kMul, rhs = kApp;
      print_expr(e.left(), lhs, out);
      out += ' ';
      out += binop_symbol(e.op());
      out += ' ';
      print_expr(e.right(), rhs, out);
      break;
    }
    case ExprKind::BoolLit:
      out += e.bool_value() ? "True" : "False";
      break;
    case ExprKind::If:
      out += "if ";
      print_expr(e.cond(), kExpr, out);
      out += " then ";
      print_expr(e.then_branch(), kExpr, out);
      out += " else ";
      print_expr(e.else_branch(), kExpr, out);
      break;
    case ExprKind::Pair:
      out += '(';
      print_expr(e.first(), kExpr, out);
      out += ", ";
      print_expr(e.second(), kExpr, out);
      out += ')';
      break;
    case ExprKind::Proj:
      print_expr(e.subject(), kAtom, out);
      out += '.';
      out += std::to_string(e.index());
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string_view binop_symbol(BinOpKind op) {
  switch (op) {
    case BinOpKind::Add: return "+";
    case BinOpKind::Sub: return "-";
    case BinOpKind::Lt: return "<";
    case BinOpKind::Div: return "/";
  }
  return "?";
}

Expr parse_expr(std::string_view text, ParseOptions opts) {
  return Parser(Lexer(text, opts).run()).whole_expr();
}

Type parse_type(std::string_view text) { return Parser(Lexer(text, {}).run()).whole_type(); }

std::string pretty_expr(const Expr& e) {
  std::string out;
  print_expr(e, kExpr, out);
  return out;
}

std::string pretty_type(const Type& t) {
  std::string out;
  print_type(t, 0, out);
  return out;
}

}  // namespace etaflat
