#include "etaflat/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace etaflat {

namespace {

constexpr std::string_view kReserved[] = {"if", "then", "else", "True", "False", "int", "rat", "bool"};

}  // namespace

bool is_reserved_word(std::string_view s) {
  return std::find(std::begin(kReserved), std::end(kReserved), s) != std::end(kReserved);
}

bool is_user_ident(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !is_reserved_word(s);
}

bool is_generated_ident(std::string_view s) {
  if (s.size() <= kGeneratedPrefix.size() || s.substr(0, kGeneratedPrefix.size()) != kGeneratedPrefix)
    return false;
  for (char c : s.substr(kGeneratedPrefix.size()))
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// ---------------------------------------------------------------- Type

Type Type::int_() {
  static const Type t(std::make_shared<const Node>(Node{TypeKind::Int, {}, {}}));
  return t;
}
Type Type::rat() {
  static const Type t(std::make_shared<const Node>(Node{TypeKind::Rat, {}, {}}));
  return t;
}
Type Type::bool_() {
  static const Type t(std::make_shared<const Node>(Node{TypeKind::Bool, {}, {}}));
  return t;
}
Type Type::arr(Type domain, Type codomain) {
  return Type(std::make_shared<const Node>(Node{TypeKind::Arr, std::move(domain), std::move(codomain)}));
}
Type Type::prod(Type left, Type right) {
  return Type(std::make_shared<const Node>(Node{TypeKind::Prod, std::move(left), std::move(right)}));
}

const Type& Type::domain() const {
  if (!node_->first) throw std::logic_error("Type::domain on atomic type");
  return *node_->first;
}
const Type& Type::codomain() const {
  if (!node_->second) throw std::logic_error("Type::codomain on atomic type");
  return *node_->second;
}
const Type& Type::left() const { return domain(); }
const Type& Type::right() const { return codomain(); }

int Type::depth() const {
  if (is_atomic()) return 1;
  return 1 + std::max(node_->first->depth(), node_->second->depth());
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.is_atomic()) return true;
  return *a.node_->first == *b.node_->first && *a.node_->second == *b.node_->second;
}

bool operator<(const Type& a, const Type& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.is_atomic()) return false;
  if (*a.node_->first != *b.node_->first) return *a.node_->first < *b.node_->first;
  return *a.node_->second < *b.node_->second;
}

// ---------------------------------------------------------------- Expr

Expr Expr::make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

Expr Expr::var(Ident name) {
  Node n{ExprKind::Var};
  n.name = std::move(name);
  return make(std::move(n));
}
Expr Expr::lam(Ident binder, Expr body) {
  Node n{ExprKind::Lam};
  n.name = std::move(binder);
  n.kids = {std::move(body)};
  return make(std::move(n));
}
Expr Expr::app(Expr fn, Expr arg) {
  Node n{ExprKind::App};
  n.kids = {std::move(fn), std::move(arg)};
  return make(std::move(n));
}
Expr Expr::anno(Expr subject, Type type) {
  Node n{ExprKind::Anno};
  n.type = std::move(type);
  n.kids = {std::move(subject)};
  return make(std::move(n));
}
Expr Expr::int_lit(std::int64_t value) {
  Node n{ExprKind::IntLit};
  n.int_value = value;
  return make(std::move(n));
}
Expr Expr::binop(BinOpKind op, Expr left, Expr right) {
  Node n{ExprKind::BinOp};
  n.op = op;
  n.kids = {std::move(left), std::move(right)};
  return make(std::move(n));
}
Expr Expr::bool_lit(bool value) {
  Node n{ExprKind::BoolLit};
  n.bool_value = value;
  return make(std::move(n));
}
Expr Expr::if_(Expr cond, Expr then_branch, Expr else_branch) {
  Node n{ExprKind::If};
  n.kids = {std::move(cond), std::move(then_branch), std::move(else_branch)};
  return make(std::move(n));
}
Expr Expr::pair(Expr first, Expr second) {
  Node n{ExprKind::Pair};
  n.kids = {std::move(first), std::move(second)};
  return make(std::move(n));
}
Expr Expr::proj(int index, Expr subject) {
  if (index != 1 && index != 2) throw std::invalid_argument("projection index must be 1 or 2");
  Node n{ExprKind::Proj};
  n.index = index;
  n.kids = {std::move(subject)};
  return make(std::move(n));
}

Expr Expr::with_children(std::vector<Expr> kids) const {
  if (kids.size() != node_->kids.size()) throw std::logic_error("Expr::with_children arity mismatch");
  Node n = *node_;
  n.kids = std::move(kids);
  return make(std::move(n));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Var:
    case ExprKind::Lam:
      if (x.name != y.name) return false;
      break;
    case ExprKind::Anno:
      if (*x.type != *y.type) return false;
      break;
    case ExprKind::IntLit:
      return x.int_value == y.int_value;
    case ExprKind::BoolLit:
      return x.bool_value == y.bool_value;
    case ExprKind::BinOp:
      if (x.op != y.op) return false;
      break;
    case ExprKind::Proj:
      if (x.index != y.index) return false;
      break;
    default:
      break;
  }
  return x.kids == y.kids;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& k : e.children()) n += node_count(k);
  return n;
}

// ----------------------------------------------------------------- Ctx

std::optional<Type> Ctx::lookup(const Ident& x) const {
  for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
    if (it->first == x) return it->second;
  return std::nullopt;
}

Ctx Ctx::extend(Ident x, Type t) const {
  Ctx c = *this;
  c.bindings_.emplace_back(std::move(x), std::move(t));
  return c;
}

Ctx Ctx::insert_at(std::size_t at, Ident x, Type t) const {
  if (at > bindings_.size()) throw std::out_of_range("Ctx::insert_at");
  Ctx c = *this;
  c.bindings_.insert(c.bindings_.begin() + static_cast<std::ptrdiff_t>(at), {std::move(x), std::move(t)});
  return c;
}

bool operator==(const Ctx& a, const Ctx& b) { return a.bindings_ == b.bindings_; }

// --------------------------------------------------------------- paths

namespace {

struct SlotInfo {
  Slot slot;
  std::string_view name;
  ExprKind kind;
  std::size_t index;
};

constexpr SlotInfo kSlots[] = {
    {Slot::LamBody, "lam-body", ExprKind::Lam, 0},
    {Slot::AppFn, "app-fn", ExprKind::App, 0},
    {Slot::AppArg, "app-arg", ExprKind::App, 1},
    {Slot::PairFirst, "pair-1", ExprKind::Pair, 0},
    {Slot::PairSecond, "pair-2", ExprKind::Pair, 1},
    {Slot::ProjSubject, "proj-subject", ExprKind::Proj, 0},
    {Slot::AnnoSubject, "anno-subject", ExprKind::Anno, 0},
    {Slot::IfCond, "if-cond", ExprKind::If, 0},
    {Slot::IfThen, "if-then", ExprKind::If, 1},
    {Slot::IfElse, "if-else", ExprKind::If, 2},
    {Slot::BinOpLeft, "binop-left", ExprKind::BinOp, 0},
    {Slot::BinOpRight, "binop-right", ExprKind::BinOp, 1},
};

const SlotInfo& info(Slot s) {
  for (const auto& i : kSlots)
    if (i.slot == s) return i;
  throw std::logic_error("unknown slot");
}

}  // namespace

std::string_view slot_name(Slot s) { return info(s).name; }

std::optional<Slot> slot_from_name(std::string_view s) {
  for (const auto& i : kSlots)
    if (i.name == s) return i.slot;
  return std::nullopt;
}

std::string path_to_string(const Path& p) {
  if (p.empty()) return ".";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '/';
    out += slot_name(p[i]);
  }
  return out;
}

Path path_from_string(std::string_view s) {
  if (s == ".") return {};
  Path p;
  std::size_t start = 0;
  while (true) {
    auto slash = s.find('/', start);
    auto piece = s.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start);
    auto slot = slot_from_name(piece);
    if (!slot) throw std::invalid_argument("unknown path selector '" + std::string(piece) + "'");
    p.push_back(*slot);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return p;
}

Path operator+(const Path& a, const Path& b) {
  Path p = a;
  p.insert(p.end(), b.begin(), b.end());
  return p;
}

std::optional<std::size_t> slot_index(ExprKind k, Slot s) {
  const auto& i = info(s);
  if (i.kind != k) return std::nullopt;
  return i.index;
}

Slot slot_of(ExprKind k, std::size_t idx) {
  for (const auto& i : kSlots)
    if (i.kind == k && i.index == idx) return i.slot;
  throw std::logic_error("no slot for child");
}

const Expr& subterm_at(const Expr& e, const Path& p) {
  const Expr* cur = &e;
  for (std::size_t d = 0; d < p.size(); ++d) {
    auto idx = slot_index(cur->kind(), p[d]);
    if (!idx) throw PathError("path " + path_to_string(p) + " invalid at selector " + std::to_string(d));
    cur = &cur->child(*idx);
  }
  return *cur;
}

namespace {

Expr replace_from(const Expr& e, const Path& p, std::size_t d, Expr&& replacement) {
  if (d == p.size()) return std::move(replacement);
  auto idx = slot_index(e.kind(), p[d]);
  if (!idx) throw PathError("path " + path_to_string(p) + " invalid at selector " + std::to_string(d));
  auto kids = e.children();
  kids[*idx] = replace_from(kids[*idx], p, d + 1, std::move(replacement));
  return e.with_children(std::move(kids));
}

void collect_free(const Expr& e, std::vector<Ident>& bound, std::set<Ident>& out) {
  switch (e.kind()) {
    case ExprKind::Var:
      if (std::find(bound.begin(), bound.end(), e.name()) == bound.end()) out.insert(e.name());
      return;
    case ExprKind::Lam:
      bound.push_back(e.name());
      collect_free(e.body(), bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& k : e.children()) collect_free(k, bound, out);
  }
}

bool occurs_free_in(const Ident& x, const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Var:
      return e.name() == x;
    case ExprKind::Lam:
      return e.name() != x && occurs_free_in(x, e.body());
    default:
      for (const auto& k : e.children())
        if (occurs_free_in(x, k)) return true;
      return false;
  }
}

// Binder stacks are compared by de Bruijn level from the right.
bool alpha_eq_in(const Expr& a, const Expr& b, std::vector<Ident>& ba, std::vector<Ident>& bb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::Var: {
      auto ia = std::find(ba.rbegin(), ba.rend(), a.name());
      auto ib = std::find(bb.rbegin(), bb.rend(), b.name());
      bool fa = ia == ba.rend();
      bool fb = ib == bb.rend();
      if (fa || fb) return fa && fb && a.name() == b.name();
      return (ia - ba.rbegin()) == (ib - bb.rbegin());
    }
    case ExprKind::Lam: {
      ba.push_back(a.name());
      bb.push_back(b.name());
      bool r = alpha_eq_in(a.body(), b.body(), ba, bb);
      ba.pop_back();
      bb.pop_back();
      return r;
    }
    case ExprKind::Anno:
      if (a.annotation() != b.annotation()) return false;
      break;
    case ExprKind::IntLit:
      return a.int_value() == b.int_value();
    case ExprKind::BoolLit:
      return a.bool_value() == b.bool_value();
    case ExprKind::BinOp:
      if (a.op() != b.op()) return false;
      break;
    case ExprKind::Proj:
      if (a.index() != b.index()) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!alpha_eq_in(a.child(i), b.child(i), ba, bb)) return false;
  return true;
}

void collect_all(const Expr& e, std::set<Ident>& out) {
  if (e.is(ExprKind::Var) || e.is(ExprKind::Lam)) out.insert(e.name());
  for (const auto& k : e.children()) collect_all(k, out);
}

}  // namespace

Expr replace_at(const Expr& e, const Path& p, Expr replacement) {
  return replace_from(e, p, 0, std::move(replacement));
}

std::set<Ident> free_vars(const Expr& e) {
  std::set<Ident> out;
  std::vector<Ident> bound;
  collect_free(e, bound, out);
  return out;
}

bool occurs_free(const Ident& x, const Expr& e) { return occurs_free_in(x, e); }

std::set<Ident> all_idents(const Expr& e) {
  std::set<Ident> out;
  collect_all(e, out);
  return out;
}

bool alpha_eq(const Expr& a, const Expr& b) {
  std::vector<Ident> ba, bb;
  return alpha_eq_in(a, b, ba, bb);
}

Ident fresh_var(const std::set<Ident>& avoid) {
  for (std::size_t n = 0;; ++n) {
    Ident candidate = std::string(kGeneratedPrefix) + std::to_string(n);
    if (!avoid.count(candidate)) return candidate;
  }
}

Ident FreshSupply::next() {
  for (;; ++counter_) {
    Ident candidate = std::string(kGeneratedPrefix) + std::to_string(counter_);
    if (!avoid_.count(candidate)) {
      avoid_.insert(candidate);
      ++counter_;
      return candidate;
    }
  }
}

}  // namespace etaflat
