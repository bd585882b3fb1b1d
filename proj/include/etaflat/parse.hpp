#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "etaflat/syntax.hpp"

namespace etaflat {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Lexical, Syntax };

  ParseError(Kind kind, int line, int column, const std::string& message);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

struct ParseOptions {
  /// Accept `_eta_<n>` identifiers (elaborator output).
  bool allow_generated = false;
};

Expr parse_expr(std::string_view text, ParseOptions opts = {});
Type parse_type(std::string_view text);

/// Minimal parenthesization; parse_expr(pretty_expr(e)) == e.
std::string pretty_expr(const Expr& e);
std::string pretty_type(const Type& t);

std::string_view binop_symbol(BinOpKind op);

}  // namespace etaflat
