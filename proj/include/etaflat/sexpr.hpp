#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace etaflat {

/// A symbol or a parenthesized list. Symbols are maximal runs of
/// non-space, non-paren characters; `;` starts a line comment.
class SExpr {
 public:
  static SExpr symbol(std::string s);
  static SExpr list(std::vector<SExpr> items);

  bool is_symbol() const { return is_symbol_; }
  bool is_list() const { return !is_symbol_; }
  const std::string& text() const;
  const std::vector<SExpr>& items() const;

  /// Head symbol of a list, or "" when not a list starting with a symbol.
  std::string_view head() const;
  std::size_t size() const { return items_.size(); }
  const SExpr& operator[](std::size_t i) const { return items_.at(i); }

  int line() const { return line_; }
  int column() const { return column_; }

  std::string str() const;

  friend bool operator==(const SExpr& a, const SExpr& b);

 private:
  friend class SExprReader;
  bool is_symbol_ = true;
  std::string text_;
  std::vector<SExpr> items_;
  int line_ = 0;
  int column_ = 0;
};

class SExprError : public std::runtime_error {
 public:
  SExprError(int line, int column, const std::string& message);
};

SExpr parse_sexpr(std::string_view text);
/// Throws SExprError pointing at `at`.
[[noreturn]] void sexpr_fail(const SExpr& at, const std::string& message);

}  // namespace etaflat
