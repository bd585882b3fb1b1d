#include "etaflat/sexpr.hpp"

#include <cctype>

namespace etaflat {

SExpr SExpr::symbol(std::string s) {
  SExpr e;
  e.text_ = std::move(s);
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items) {
  SExpr e;
  e.is_symbol_ = false;
  e.items_ = std::move(items);
  return e;
}

const std::string& SExpr::text() const {
  if (!is_symbol_) throw std::logic_error("SExpr::text on a list");
  return text_;
}

const std::vector<SExpr>& SExpr::items() const {
  if (is_symbol_) throw std::logic_error("SExpr::items on a symbol");
  return items_;
}

std::string_view SExpr::head() const {
  if (is_symbol_ || items_.empty() || !items_[0].is_symbol_) return {};
  return items_[0].text_;
}

std::string SExpr::str() const {
  if (is_symbol_) return text_;
  std::string out = "(";
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out += ' ';
    out += items_[i].str();
  }
  out += ')';
  return out;
}

bool operator==(const SExpr& a, const SExpr& b) {
  if (a.is_symbol_ != b.is_symbol_) return false;
  return a.is_symbol_ ? a.text_ == b.text_ : a.items_ == b.items_;
}

SExprError::SExprError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message) {}

class SExprReader {
 public:
  explicit SExprReader(std::string_view src) : src_(src) {}

  SExpr whole() {
    skip();
    SExpr e = read();
    skip();
    if (pos_ < src_.size()) throw SExprError(line_, col_, "trailing input after s-expression");
    return e;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_[pos_] == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    if (pos_ >= src_.size()) throw SExprError(line_, col_, "unexpected end of input");
    int line = line_, col = col_;
    char c = src_[pos_];
    if (c == ')') throw SExprError(line, col, "unexpected ')'");
    SExpr out;
    if (c == '(') {
      advance();
      std::vector<SExpr> items;
      while (true) {
        skip();
        if (pos_ >= src_.size()) throw SExprError(line, col, "unclosed '('");
        if (src_[pos_] == ')') {
          advance();
          break;
        }
        items.push_back(read());
      }
      out = SExpr::list(std::move(items));
    } else {
      std::size_t start = pos_;
      while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '(' &&
             src_[pos_] != ')' && src_[pos_] != ';')
        advance();
      out = SExpr::symbol(std::string(src_.substr(start, pos_ - start)));
    }
    out.line_ = line;
    out.column_ = col;
    return out;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

SExpr parse_sexpr(std::string_view text) { return SExprReader(text).whole(); }

void sexpr_fail(const SExpr& at, const std::string& message) {
  throw SExprError(at.line(), at.column(), message);
}

}  // namespace etaflat
