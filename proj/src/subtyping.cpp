#include "etaflat/subtyping.hpp"

#include <algorithm>

#include "etaflat/parse.hpp"

namespace etaflat {

SubDeriv SubDeriv::refl_int() { return claim(SubRule::ReflInt, Type::int_(), Type::int_(), {}); }
SubDeriv SubDeriv::refl_bool() { return claim(SubRule::ReflBool, Type::bool_(), Type::bool_(), {}); }
SubDeriv SubDeriv::refl_rat() { return claim(SubRule::ReflRat, Type::rat(), Type::rat(), {}); }
SubDeriv SubDeriv::int_rat() { return claim(SubRule::IntRat, Type::int_(), Type::rat(), {}); }

SubDeriv SubDeriv::arr(SubDeriv dom, SubDeriv cod) {
  Type lhs = Type::arr(dom.rhs(), cod.lhs());
  Type rhs = Type::arr(dom.lhs(), cod.rhs());
  return claim(SubRule::Arr, lhs, rhs, {std::move(dom), std::move(cod)});
}

SubDeriv SubDeriv::prod(SubDeriv left, SubDeriv right) {
  Type lhs = Type::prod(left.lhs(), right.lhs());
  Type rhs = Type::prod(left.rhs(), right.rhs());
  return claim(SubRule::Prod, lhs, rhs, {std::move(left), std::move(right)});
}

SubDeriv SubDeriv::claim(SubRule rule, Type lhs, Type rhs, std::vector<SubDeriv> premises) {
  return SubDeriv(std::make_shared<const Node>(Node{rule, std::move(lhs), std::move(rhs), std::move(premises)}));
}

bool operator==(const SubDeriv& a, const SubDeriv& b) {
  if (a.node_ == b.node_) return true;
  return a.rule() == b.rule() && a.lhs() == b.lhs() && a.rhs() == b.rhs() && a.premises() == b.premises();
}

SubDerivError::SubDerivError(std::string path, const std::string& message)
    : std::runtime_error("at " + path + ": " + message), path_(std::move(path)) {}

std::optional<SubDeriv> deep_sub(const Type& a, const Type& b) {
  switch (a.kind()) {
    case TypeKind::Int:
      if (b.is(TypeKind::Int)) return SubDeriv::refl_int();
      if (b.is(TypeKind::Rat)) return SubDeriv::int_rat();
      return std::nullopt;
    case TypeKind::Rat:
      if (b.is(TypeKind::Rat)) return SubDeriv::refl_rat();
      return std::nullopt;
    case TypeKind::Bool:
      if (b.is(TypeKind::Bool)) return SubDeriv::refl_bool();
      return std::nullopt;
    case TypeKind::Arr: {
      if (!b.is(TypeKind::Arr)) return std::nullopt;
      auto dom = deep_sub(b.domain(), a.domain());
      if (!dom) return std::nullopt;
      auto cod = deep_sub(a.codomain(), b.codomain());
      if (!cod) return std::nullopt;
      return SubDeriv::arr(*dom, *cod);
    }
    case TypeKind::Prod: {
      if (!b.is(TypeKind::Prod)) return std::nullopt;
      auto l = deep_sub(a.left(), b.left());
      if (!l) return std::nullopt;
      auto r = deep_sub(a.right(), b.right());
      if (!r) return std::nullopt;
      return SubDeriv::prod(*l, *r);
    }
  }
  return std::nullopt;
}

bool shallow_sub(const Type& a, const Type& b) {
  return a == b || (a.is(TypeKind::Int) && b.is(TypeKind::Rat));
}

namespace {

std::string child_path(const std::string& parent, const char* slot) {
  return parent == "." ? std::string(slot) : parent + "/" + slot;
}

std::string judgment(const Type& a, const Type& b) { return pretty_type(a) + " :< " + pretty_type(b); }

std::pair<Type, Type> check_node(const SubDeriv& d, const std::string& path) {
  auto mismatch = [&](const std::string& why) -> SubDerivError {
    return SubDerivError(path, why + " (claimed " + judgment(d.lhs(), d.rhs()) + ")");
  };
  auto leaf = [&](const Type& lhs, const Type& rhs) {
    if (!d.is_leaf()) throw mismatch("axiom has premises");
    if (d.lhs() != lhs || d.rhs() != rhs) throw mismatch("axiom concludes " + judgment(lhs, rhs));
    return std::pair{d.lhs(), d.rhs()};
  };
  switch (d.rule()) {
    case SubRule::ReflInt: return leaf(Type::int_(), Type::int_());
    case SubRule::ReflBool: return leaf(Type::bool_(), Type::bool_());
    case SubRule::ReflRat: return leaf(Type::rat(), Type::rat());
    case SubRule::IntRat: return leaf(Type::int_(), Type::rat());
    case SubRule::Arr:
    case SubRule::Prod: {
      bool arr = d.rule() == SubRule::Arr;
      if (d.premises().size() != 2) throw mismatch("rule needs two premises");
      auto [p1l, p1r] = check_node(d.premises()[0], child_path(path, arr ? "dom" : "left"));
      auto [p2l, p2r] = check_node(d.premises()[1], child_path(path, arr ? "cod" : "right"));
      Type lhs = arr ? Type::arr(p1r, p2l) : Type::prod(p1l, p2l);
      Type rhs = arr ? Type::arr(p1l, p2r) : Type::prod(p1r, p2r);
      if (d.lhs() != lhs || d.rhs() != rhs) throw mismatch("premises conclude " + judgment(lhs, rhs));
      return {lhs, rhs};
    }
  }
  throw mismatch("unknown rule");
}

}  // namespace

std::pair<Type, Type> check_sub_deriv(const SubDeriv& d) { return check_node(d, "."); }

bool is_pure_refl(const SubDeriv& d) {
  if (d.rule() == SubRule::IntRat) return false;
  return std::all_of(d.premises().begin(), d.premises().end(), is_pure_refl);
}

std::size_t count_rule(const SubDeriv& d, SubRule r) {
  std::size_t n = d.rule() == r ? 1 : 0;
  for (const auto& p : d.premises()) n += count_rule(p, r);
  return n;
}

std::size_t height(const SubDeriv& d) {
  std::size_t h = 0;
  for (const auto& p : d.premises()) h = std::max(h, height(p));
  return h + 1;
}

SExpr type_to_sexpr(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Int: return SExpr::symbol("int");
    case TypeKind::Rat: return SExpr::symbol("rat");
    case TypeKind::Bool: return SExpr::symbol("bool");
    case TypeKind::Arr:
      return SExpr::list({SExpr::symbol("arr"), type_to_sexpr(t.domain()), type_to_sexpr(t.codomain())});
    case TypeKind::Prod:
      return SExpr::list({SExpr::symbol("prod"), type_to_sexpr(t.left()), type_to_sexpr(t.right())});
  }
  return SExpr::symbol("?");
}

Type type_from_sexpr(const SExpr& s) {
  if (s.is_symbol()) {
    if (s.text() == "int") return Type::int_();
    if (s.text() == "rat") return Type::rat();
    if (s.text() == "bool") return Type::bool_();
    sexpr_fail(s, "unknown type '" + s.text() + "'");
  }
  if (s.size() == 3 && s.head() == "arr") return Type::arr(type_from_sexpr(s[1]), type_from_sexpr(s[2]));
  if (s.size() == 3 && s.head() == "prod") return Type::prod(type_from_sexpr(s[1]), type_from_sexpr(s[2]));
  sexpr_fail(s, "malformed type " + s.str());
}

SExpr sub_deriv_to_sexpr(const SubDeriv& d) {
  auto tag = [](const char* t) { return SExpr::symbol(t); };
  switch (d.rule()) {
    case SubRule::ReflInt: return SExpr::list({tag("refl-int")});
    case SubRule::ReflBool: return SExpr::list({tag("refl-bool")});
    case SubRule::ReflRat: return SExpr::list({tag("refl-rat")});
    case SubRule::IntRat: return SExpr::list({tag("int-rat")});
    case SubRule::Arr:
      return SExpr::list({tag("arr"), sub_deriv_to_sexpr(d.premises().at(0)), sub_deriv_to_sexpr(d.premises().at(1))});
    case SubRule::Prod:
      return SExpr::list({tag("prod"), sub_deriv_to_sexpr(d.premises().at(0)), sub_deriv_to_sexpr(d.premises().at(1))});
  }
  return SExpr::list({});
}

SubDeriv sub_deriv_from_sexpr(const SExpr& s) {
  if (!s.is_list() || s.head().empty()) sexpr_fail(s, "expected a derivation node, found " + s.str());
  auto h = s.head();
  auto arity = [&](std::size_t n) {
    if (s.size() != n + 1) sexpr_fail(s, "rule '" + std::string(h) + "' takes " + std::to_string(n) + " premises");
  };
  if (h == "refl-int") return arity(0), SubDeriv::refl_int();
  if (h == "refl-bool") return arity(0), SubDeriv::refl_bool();
  if (h == "refl-rat") return arity(0), SubDeriv::refl_rat();
  if (h == "int-rat") return arity(0), SubDeriv::int_rat();
  if (h == "arr") return arity(2), SubDeriv::arr(sub_deriv_from_sexpr(s[1]), sub_deriv_from_sexpr(s[2]));
  if (h == "prod") return arity(2), SubDeriv::prod(sub_deriv_from_sexpr(s[1]), sub_deriv_from_sexpr(s[2]));
  sexpr_fail(s, "unknown subtyping rule '" + std::string(h) + "'");
}

}  // namespace etaflat
