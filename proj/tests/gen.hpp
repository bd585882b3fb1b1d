#pragma once

#include <random>
#include <vector>

#include "etaflat/bcd.hpp"
#include "etaflat/subtyping.hpp"
#include "etaflat/syntax.hpp"
#include "etaflat/typing.hpp"

// Random and exhaustive generators shared by the unit and acceptance tests.
namespace etaflat::testgen {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Type random_atom(Rng& rng) {
  switch (pick(rng, 3)) {
    case 0: return Type::int_();
    case 1: return Type::rat();
    default: return Type::bool_();
  }
}

/// depth counts constructors, an atom has depth 1.
inline Type random_type(Rng& rng, int depth) {
  if (depth <= 1 || coin(rng, 0.4)) return random_atom(rng);
  if (coin(rng)) return Type::arr(random_type(rng, depth - 1), random_type(rng, depth - 1));
  return Type::prod(random_type(rng, depth - 1), random_type(rng, depth - 1));
}

inline Type random_supertype(Rng& rng, const Type& a);

/// Some A with A :< b.
inline Type random_subtype(Rng& rng, const Type& b) {
  switch (b.kind()) {
    case TypeKind::Rat: return coin(rng) ? Type::int_() : Type::rat();
    case TypeKind::Arr: return Type::arr(random_supertype(rng, b.domain()), random_subtype(rng, b.codomain()));
    case TypeKind::Prod: return Type::prod(random_subtype(rng, b.left()), random_subtype(rng, b.right()));
    default: return b;
  }
}

/// Some B with a :< B.
inline Type random_supertype(Rng& rng, const Type& a) {
  switch (a.kind()) {
    case TypeKind::Int: return coin(rng) ? Type::rat() : Type::int_();
    case TypeKind::Arr: return Type::arr(random_subtype(rng, a.domain()), random_supertype(rng, a.codomain()));
    case TypeKind::Prod: return Type::prod(random_supertype(rng, a.left()), random_supertype(rng, a.right()));
    default: return a;
  }
}

inline std::vector<Type> all_types(int depth) {
  std::vector<Type> out{Type::int_(), Type::rat(), Type::bool_()};
  if (depth <= 1) return out;
  auto smaller = all_types(depth - 1);
  for (const auto& a : smaller)
    for (const auto& b : smaller) {
      out.push_back(Type::arr(a, b));
      out.push_back(Type::prod(a, b));
    }
  return out;
}

/// Every SubDeriv of height at most h.
inline std::vector<SubDeriv> all_sub_derivs(int h) {
  std::vector<SubDeriv> out{SubDeriv::refl_int(), SubDeriv::refl_bool(), SubDeriv::refl_rat(), SubDeriv::int_rat()};
  if (h <= 1) return out;
  auto smaller = all_sub_derivs(h - 1);
  for (const auto& a : smaller)
    for (const auto& b : smaller) {
      out.push_back(SubDeriv::arr(a, b));
      out.push_back(SubDeriv::prod(a, b));
    }
  return out;
}

/// Well-typed programs for the deep checker, biased toward annotations at a
/// strict, non-atomic subtype of the expected type.
class ProgramGen {
 public:
  explicit ProgramGen(Rng& rng) : rng_(rng) {}

  /// e with ctx |- e <= b in the deep system.
  Expr checks(const Ctx& ctx, const Type& b, int fuel) {
    if (fuel > 0 && coin(rng_, 0.3)) {
      Type a = random_subtype(rng_, b);
      return Expr::anno(checks(ctx, a, fuel - 1), a);
    }
    if (fuel <= 0) return leaf(ctx, b);
    switch (b.kind()) {
      case TypeKind::Arr:
        if (coin(rng_, 0.8)) {
          Ident x = binder();
          return Expr::lam(x, checks(ctx.extend(x, b.domain()), b.codomain(), fuel - 1));
        }
        break;
      case TypeKind::Prod:
        if (coin(rng_, 0.8)) return Expr::pair(checks(ctx, b.left(), fuel - 1), checks(ctx, b.right(), fuel - 1));
        break;
      default:
        break;
    }
    switch (pick(rng_, 6)) {
      case 0: return leaf(ctx, b);
      case 1: {
        Type a = random_type(rng_, 2);
        Type f = Type::arr(a, random_subtype(rng_, b));
        return Expr::app(Expr::anno(checks(ctx, f, fuel - 1), f), checks(ctx, a, fuel - 1));
      }
      case 2: {
        Type other = random_type(rng_, 2);
        bool first = coin(rng_);
        Type p = first ? Type::prod(random_subtype(rng_, b), other) : Type::prod(other, random_subtype(rng_, b));
        return Expr::proj(first ? 1 : 2, Expr::anno(checks(ctx, p, fuel - 1), p));
      }
      case 3:
        return Expr::if_(checks(ctx, Type::bool_(), fuel - 2), checks(ctx, b, fuel - 2), checks(ctx, b, fuel - 2));
      default:
        return arith(ctx, b, fuel);
    }
  }

 private:
  Ident binder() {
    static const char* names[] = {"x", "y", "z", "f", "g", "p"};
    return names[pick(rng_, 6)];
  }

  Expr arith(const Ctx& ctx, const Type& b, int fuel) {
    switch (b.kind()) {
      case TypeKind::Int:
        return Expr::binop(coin(rng_) ? BinOpKind::Add : BinOpKind::Sub, checks(ctx, Type::int_(), fuel - 1),
                           checks(ctx, Type::int_(), fuel - 1));
      case TypeKind::Rat: {
        static const BinOpKind ops[] = {BinOpKind::Add, BinOpKind::Sub, BinOpKind::Div};
        return Expr::binop(ops[pick(rng_, 3)], checks(ctx, Type::rat(), fuel - 1), checks(ctx, Type::rat(), fuel - 1));
      }
      case TypeKind::Bool:
        return Expr::binop(BinOpKind::Lt, checks(ctx, Type::rat(), fuel - 1), checks(ctx, Type::rat(), fuel - 1));
      default:
        return leaf(ctx, b);
    }
  }

  Expr leaf(const Ctx& ctx, const Type& b) {
    std::vector<Ident> usable;
    for (const auto& [x, t] : ctx.bindings())
      if (ctx.lookup(x) == t && deep_sub(t, b)) usable.push_back(x);
    if (!usable.empty() && coin(rng_, 0.7)) return Expr::var(usable[pick(rng_, static_cast<int>(usable.size()))]);
    switch (b.kind()) {
      case TypeKind::Int:
      case TypeKind::Rat: return Expr::int_lit(pick(rng_, 100));
      case TypeKind::Bool: return Expr::bool_lit(coin(rng_));
      case TypeKind::Arr: {
        Ident x = binder();
        return Expr::lam(x, leaf(ctx.extend(x, b.domain()), b.codomain()));
      }
      case TypeKind::Prod: return Expr::pair(leaf(ctx, b.left()), leaf(ctx, b.right()));
    }
    return Expr::int_lit(0);
  }

  Rng& rng_;
};

struct Program {
  Expr expr;
  Mode mode;
  Type type;
};

/// A closed program of at most max_nodes nodes, in synth or check mode.
inline Program random_program(Rng& rng, std::size_t max_nodes = 30) {
  ProgramGen gen(rng);
  for (;;) {
    Type b = random_type(rng, 3);
    int fuel = 1 + pick(rng, 4);
    Expr e = gen.checks(Ctx{}, b, fuel);
    if (node_count(e) > max_nodes) continue;
    if (coin(rng)) return {e, Mode::Check, b};
    if (e.is(ExprKind::Anno)) return {e, Mode::Synth, e.annotation()};
    if (node_count(e) + 1 > max_nodes) continue;
    return {Expr::anno(e, b), Mode::Synth, b};
  }
}

/// Arbitrary (not necessarily well-typed) expressions for syntax tests.
inline Expr random_expr(Rng& rng, int fuel) {
  static const char* names[] = {"x", "y", "f", "foo", "x1", "a_b"};
  if (fuel <= 0 || coin(rng, 0.2)) {
    switch (pick(rng, 3)) {
      case 0: return Expr::var(names[pick(rng, 6)]);
      case 1: return Expr::int_lit(std::uniform_int_distribution<std::int64_t>(-1000, 1000)(rng));
      default: return Expr::bool_lit(coin(rng));
    }
  }
  auto sub = [&] { return random_expr(rng, fuel - 1); };
  switch (pick(rng, 8)) {
    case 0: return Expr::lam(names[pick(rng, 6)], sub());
    case 1: return Expr::app(sub(), sub());
    case 2: return Expr::anno(sub(), random_type(rng, 3));
    case 3: {
      static const BinOpKind ops[] = {BinOpKind::Add, BinOpKind::Sub, BinOpKind::Lt, BinOpKind::Div};
      return Expr::binop(ops[pick(rng, 4)], sub(), sub());
    }
    case 4: return Expr::if_(sub(), sub(), sub());
    case 5: return Expr::pair(sub(), sub());
    case 6: return Expr::proj(1 + pick(rng, 2), sub());
    default: return sub();
  }
}

inline bcd::Type random_bcd_type(Rng& rng, int depth, int atoms = 2) {
  static const char* names[] = {"a", "b", "c"};
  if (depth <= 1 || coin(rng, 0.3)) {
    if (coin(rng, 0.2)) return bcd::Type::top();
    return bcd::Type::atom(names[pick(rng, atoms)]);
  }
  auto l = random_bcd_type(rng, depth - 1, atoms);
  auto r = random_bcd_type(rng, depth - 1, atoms);
  return coin(rng) ? bcd::Type::arr(l, r) : bcd::Type::sect(l, r);
}

}  // namespace etaflat::testgen
