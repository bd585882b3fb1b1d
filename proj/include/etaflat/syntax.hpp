#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace etaflat {

using Ident = std::string;

/// Prefix reserved for machine-generated binders.
inline constexpr std::string_view kGeneratedPrefix = "_eta_";

bool is_reserved_word(std::string_view s);
/// True for a user-writable identifier: `[A-Za-z][A-Za-z0-9_]*`, not reserved.
bool is_user_ident(std::string_view s);
/// True for `_eta_<digits>`.
bool is_generated_ident(std::string_view s);

// ---------------------------------------------------------------- types

enum class TypeKind { Int, Rat, Bool, Arr, Prod };

/// Immutable type tree with structural equality. Copies share structure.
class Type {
 public:
  static Type int_();
  static Type rat();
  static Type bool_();
  static Type arr(Type domain, Type codomain);
  static Type prod(Type left, Type right);

  TypeKind kind() const;
  bool is(TypeKind k) const { return kind() == k; }
  bool is_atomic() const { return kind() != TypeKind::Arr && kind() != TypeKind::Prod; }

  // Arr: domain/codomain. Prod: left/right. Both alias the two child slots.
  const Type& domain() const;
  const Type& codomain() const;
  const Type& left() const;
  const Type& right() const;

  int depth() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
  friend bool operator<(const Type& a, const Type& b);

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Type::Node {
  TypeKind kind;
  std::optional<Type> first;
  std::optional<Type> second;
};

inline TypeKind Type::kind() const { return node_->kind; }

// ---------------------------------------------------------- expressions

enum class BinOpKind { Add, Sub, Lt, Div };

enum class ExprKind { Var, Lam, App, Anno, IntLit, BinOp, BoolLit, If, Pair, Proj };

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  static Expr var(Ident name);
  static Expr lam(Ident binder, Expr body);
  static Expr app(Expr fn, Expr arg);
  static Expr anno(Expr subject, Type type);
  static Expr int_lit(std::int64_t value);
  static Expr binop(BinOpKind op, Expr left, Expr right);
  static Expr bool_lit(bool value);
  static Expr if_(Expr cond, Expr then_branch, Expr else_branch);
  static Expr pair(Expr first, Expr second);
  /// index must be 1 or 2.
  static Expr proj(int index, Expr subject);

  ExprKind kind() const { return node_->kind; }
  bool is(ExprKind k) const { return node_->kind == k; }

  /// Variable name or lambda binder.
  const Ident& name() const { return node_->name; }
  std::int64_t int_value() const { return node_->int_value; }
  bool bool_value() const { return node_->bool_value; }
  BinOpKind op() const { return node_->op; }
  int index() const { return node_->index; }
  const Type& annotation() const { return *node_->type; }

  const std::vector<Expr>& children() const { return node_->kids; }
  const Expr& child(std::size_t i) const { return node_->kids.at(i); }

  const Expr& body() const { return child(0); }     // Lam
  const Expr& fn() const { return child(0); }       // App
  const Expr& arg() const { return child(1); }      // App
  const Expr& subject() const { return child(0); }  // Anno, Proj
  const Expr& left() const { return child(0); }     // BinOp
  const Expr& right() const { return child(1); }    // BinOp
  const Expr& cond() const { return child(0); }     // If
  const Expr& then_branch() const { return child(1); }
  const Expr& else_branch() const { return child(2); }
  const Expr& first() const { return child(0); }   // Pair
  const Expr& second() const { return child(1); }  // Pair

  /// Same node, different children (arity must match).
  Expr with_children(std::vector<Expr> kids) const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  struct Node {
    ExprKind kind;
    Ident name;
    std::int64_t int_value = 0;
    bool bool_value = false;
    BinOpKind op = BinOpKind::Add;
    int index = 0;
    std::optional<Type> type;
    std::vector<Expr> kids;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Node n);
  std::shared_ptr<const Node> node_;
};

std::size_t node_count(const Expr& e);

// ------------------------------------------------------------- contexts

/// Ordered typing assumptions; lookup is rightmost-wins.
class Ctx {
 public:
  Ctx() = default;
  explicit Ctx(std::vector<std::pair<Ident, Type>> bindings) : bindings_(std::move(bindings)) {}

  std::optional<Type> lookup(const Ident& x) const;
  Ctx extend(Ident x, Type t) const;
  /// Inserts a binding at position `at` (0 = leftmost).
  Ctx insert_at(std::size_t at, Ident x, Type t) const;

  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::vector<std::pair<Ident, Type>>& bindings() const { return bindings_; }

  friend bool operator==(const Ctx& a, const Ctx& b);
  friend bool operator!=(const Ctx& a, const Ctx& b) { return !(a == b); }

 private:
  std::vector<std::pair<Ident, Type>> bindings_;
};

// ---------------------------------------------------------------- paths

enum class Slot {
  LamBody,
  AppFn,
  AppArg,
  PairFirst,
  PairSecond,
  ProjSubject,
  AnnoSubject,
  IfCond,
  IfThen,
  IfElse,
  BinOpLeft,
  BinOpRight,
};

using Path = std::vector<Slot>;

std::string_view slot_name(Slot s);
std::optional<Slot> slot_from_name(std::string_view s);
/// `/`-joined selectors; `.` for the root.
std::string path_to_string(const Path& p);
Path path_from_string(std::string_view s);  // throws std::invalid_argument

Path operator+(const Path& a, const Path& b);

class PathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Child index addressed by `s` in a node of kind `k`, if that slot exists there.
std::optional<std::size_t> slot_index(ExprKind k, Slot s);
/// The slot naming child `i` of a node of kind `k`.
Slot slot_of(ExprKind k, std::size_t i);

const Expr& subterm_at(const Expr& e, const Path& p);  // throws PathError
Expr replace_at(const Expr& e, const Path& p, Expr replacement);

// ----------------------------------------------------- term utilities

std::set<Ident> free_vars(const Expr& e);
bool occurs_free(const Ident& x, const Expr& e);
/// Every identifier occurring in e, free or bound.
std::set<Ident> all_idents(const Expr& e);
/// Equality up to consistent renaming of bound variables.
bool alpha_eq(const Expr& a, const Expr& b);
/// `_eta_<n>` for the smallest n not in avoid.
Ident fresh_var(const std::set<Ident>& avoid);

/// Monotone fresh-name generator: every issued name joins the avoid set.
class FreshSupply {
 public:
  FreshSupply() = default;
  explicit FreshSupply(std::set<Ident> avoid) : avoid_(std::move(avoid)) {}
  Ident next();
  void reserve(const Ident& x) { avoid_.insert(x); }
  const std::set<Ident>& avoid() const { return avoid_; }

 private:
  std::set<Ident> avoid_;
  std::size_t counter_ = 0;
};

}  // namespace etaflat
