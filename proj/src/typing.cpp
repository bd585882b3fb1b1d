#include "etaflat/typing.hpp"

#include "etaflat/parse.hpp"

namespace etaflat {

std::string_view rule_name(TypingRule r) {
  switch (r) {
    case TypingRule::Var: return "var";
    case TypingRule::ArrIntro: return "arr-intro";
    case TypingRule::ArrElim: return "arr-elim";
    case TypingRule::Sub: return "sub";
    case TypingRule::Anno: return "anno";
    case TypingRule::ProdIntro: return "prod-intro";
    case TypingRule::ProdElim: return "prod-elim";
    case TypingRule::IntIntro: return "int-intro";
    case TypingRule::IntOp: return "int-op";
    case TypingRule::RatOp: return "rat-op";
    case TypingRule::BoolIntro: return "bool-intro";
    case TypingRule::BoolElim: return "bool-elim";
  }
  return "?";
}

std::string_view flavor_name(Flavor f) { return f == Flavor::Deep ? "deep" : "shallow"; }

std::size_t TypingDeriv::size() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

TypeError::TypeError(Kind kind, Path path, const std::string& message)
    : std::runtime_error("at " + path_to_string(path) + ": " + message), kind_(kind), path_(std::move(path)) {}

namespace {

TypingDeriv node(TypingRule rule, const Ctx& ctx, const Expr& e, Mode mode, Type type,
                 std::vector<TypingDeriv> premises = {}) {
  return TypingDeriv{rule, ctx, e, mode, std::move(type), std::move(premises), std::nullopt};
}

Path child(const Path& p, Slot s) {
  Path q = p;
  q.push_back(s);
  return q;
}

class Checker {
 public:
  explicit Checker(Flavor flavor) : flavor_(flavor) {}

  Synthesized synth(const Ctx& ctx, const Expr& e, const Path& at) {
    switch (e.kind()) {
      case ExprKind::Var: {
        auto t = ctx.lookup(e.name());
        if (!t) throw TypeError(TypeError::Kind::UnboundVariable, at, "unbound variable '" + e.name() + "'");
        return {*t, node(TypingRule::Var, ctx, e, Mode::Synth, *t)};
      }
      case ExprKind::Anno: {
        auto d = check(ctx, e.subject(), e.annotation(), child(at, Slot::AnnoSubject));
        return {e.annotation(), node(TypingRule::Anno, ctx, e, Mode::Synth, e.annotation(), {std::move(d)})};
      }
      case ExprKind::App: {
        auto f = synth(ctx, e.fn(), child(at, Slot::AppFn));
        if (!f.type.is(TypeKind::Arr))
          throw TypeError(TypeError::Kind::NotAFunction, child(at, Slot::AppFn),
                          "application head has non-arrow type " + pretty_type(f.type));
        auto a = check(ctx, e.arg(), f.type.domain(), child(at, Slot::AppArg));
        Type result = f.type.codomain();
        return {result, node(TypingRule::ArrElim, ctx, e, Mode::Synth, result, {std::move(f.deriv), std::move(a)})};
      }
      case ExprKind::IntLit:
        return {Type::int_(), node(TypingRule::IntIntro, ctx, e, Mode::Synth, Type::int_())};
      case ExprKind::BoolLit:
        return {Type::bool_(), node(TypingRule::BoolIntro, ctx, e, Mode::Synth, Type::bool_())};
      case ExprKind::BinOp:
        return synth_binop(ctx, e, at);
      case ExprKind::Proj: {
        auto s = synth(ctx, e.subject(), child(at, Slot::ProjSubject));
        if (!s.type.is(TypeKind::Prod))
          throw TypeError(TypeError::Kind::NotAProduct, child(at, Slot::ProjSubject),
                          "projection from non-product type " + pretty_type(s.type));
        Type result = e.index() == 1 ? s.type.left() : s.type.right();
        return {result, node(TypingRule::ProdElim, ctx, e, Mode::Synth, result, {std::move(s.deriv)})};
      }
      case ExprKind::Lam:
        throw TypeError(TypeError::Kind::CannotSynthesize, at, "cannot synthesize a type for a lambda; annotate it");
      case ExprKind::Pair:
        throw TypeError(TypeError::Kind::CannotSynthesize, at, "cannot synthesize a type for a pair; annotate it");
      case ExprKind::If:
        throw TypeError(TypeError::Kind::CannotSynthesize, at,
                        "cannot synthesize a type for a conditional; annotate it");
    }
    throw std::logic_error("unreachable");
  }

  TypingDeriv check(const Ctx& ctx, const Expr& e, const Type& b, const Path& at) {
    if (e.is(ExprKind::Lam) && b.is(TypeKind::Arr)) {
      auto body = check(ctx.extend(e.name(), b.domain()), e.body(), b.codomain(), child(at, Slot::LamBody));
      return node(TypingRule::ArrIntro, ctx, e, Mode::Check, b, {std::move(body)});
    }
    if (e.is(ExprKind::Pair) && b.is(TypeKind::Prod)) {
      auto l = check(ctx, e.first(), b.left(), child(at, Slot::PairFirst));
      auto r = check(ctx, e.second(), b.right(), child(at, Slot::PairSecond));
      return node(TypingRule::ProdIntro, ctx, e, Mode::Check, b, {std::move(l), std::move(r)});
    }
    if (e.is(ExprKind::If)) {
      auto c = check(ctx, e.cond(), Type::bool_(), child(at, Slot::IfCond));
      auto t = check(ctx, e.then_branch(), b, child(at, Slot::IfThen));
      auto f = check(ctx, e.else_branch(), b, child(at, Slot::IfElse));
      return node(TypingRule::BoolElim, ctx, e, Mode::Check, b, {std::move(c), std::move(t), std::move(f)});
    }
    if (e.is(ExprKind::Lam) || e.is(ExprKind::Pair)) {
      throw TypeError(TypeError::Kind::CannotSynthesize, at,
                      std::string(e.is(ExprKind::Lam) ? "lambda" : "pair") + " cannot be checked against " +
                          pretty_type(b));
    }
    auto s = synth(ctx, e, at);
    auto d = node(TypingRule::Sub, ctx, e, Mode::Check, b, {std::move(s.deriv)});
    if (flavor_ == Flavor::Deep) {
      auto sub = deep_sub(s.type, b);
      if (!sub) throw failure(at, s.type, b);
      d.witness = *sub;
    } else {
      if (!shallow_sub(s.type, b)) throw failure(at, s.type, b);
      d.witness = ShallowWitness{s.type, b};
    }
    return d;
  }

 private:
  TypeError failure(const Path& at, const Type& a, const Type& b) const {
    return TypeError(TypeError::Kind::SubsumptionFailure, at,
                     "expression of type " + pretty_type(a) + " is not a " + std::string(flavor_name(flavor_)) +
                         " subtype of " + pretty_type(b));
  }

  Synthesized synth_binop(const Ctx& ctx, const Expr& e, const Path& at) {
    auto operands = [&](const Type& t) {
      auto l = check(ctx, e.left(), t, child(at, Slot::BinOpLeft));
      auto r = check(ctx, e.right(), t, child(at, Slot::BinOpRight));
      return std::vector<TypingDeriv>{std::move(l), std::move(r)};
    };
    if (e.op() == BinOpKind::Add || e.op() == BinOpKind::Sub) {
      try {
        return {Type::int_(), node(TypingRule::IntOp, ctx, e, Mode::Synth, Type::int_(), operands(Type::int_()))};
      } catch (const TypeError&) {
        // fall through to the rat rule
      }
    }
    Type result = e.op() == BinOpKind::Lt ? Type::bool_() : Type::rat();
    return {result, node(TypingRule::RatOp, ctx, e, Mode::Synth, result, operands(Type::rat()))};
  }

  Flavor flavor_;
};

// ------------------------------------------------------------ validation

struct Invalid {
  std::string at;
  std::string reason;
};

std::string premise_path(const std::string& parent, std::size_t i) {
  return parent == "." ? std::to_string(i) : parent + "/" + std::to_string(i);
}

class Validator {
 public:
  explicit Validator(Flavor flavor) : flavor_(flavor) {}

  void run(const TypingDeriv& d) {
    declarative_ = !d.mode.has_value();
    visit(d, ".");
  }

 private:
  [[noreturn]] void fail(const std::string& at, const std::string& why) const { throw Invalid{at, why}; }

  void visit(const TypingDeriv& d, const std::string& at) {
    if (d.mode.has_value() == declarative_) fail(at, "mixes bidirectional and declarative judgments");
    for (std::size_t i = 0; i < d.premises.size(); ++i) visit(d.premises[i], premise_path(at, i));
    validate(d, at);
  }

  void want_mode(const TypingDeriv& d, Mode m, const std::string& at) const {
    if (!declarative_ && d.mode != m)
      fail(at, std::string(rule_name(d.rule)) + " concludes a " + (m == Mode::Synth ? "synthesis" : "checking") +
                   " judgment");
  }

  void want_kind(const TypingDeriv& d, ExprKind k, const std::string& at) const {
    if (!d.expr.is(k)) fail(at, std::string(rule_name(d.rule)) + " does not apply to " + pretty_expr(d.expr));
  }

  void want_arity(const TypingDeriv& d, std::size_t n, const std::string& at) const {
    if (d.premises.size() != n) fail(at, std::string(rule_name(d.rule)) + " needs " + std::to_string(n) + " premises");
  }

  // The i-th premise must conclude ctx |- e (mode) t.
  void want_premise(const TypingDeriv& d, std::size_t i, const Ctx& ctx, const Expr& e, Mode m, const Type* t,
                    const std::string& at) const {
    const auto& p = d.premises[i];
    auto here = premise_path(at, i);
    if (p.ctx != ctx) fail(here, "premise context does not match the rule");
    if (p.expr != e) fail(here, "premise subject " + pretty_expr(p.expr) + " should be " + pretty_expr(e));
    if (!declarative_ && p.mode != m) fail(here, "premise has the wrong mode");
    if (t && p.type != *t) fail(here, "premise type " + pretty_type(p.type) + " should be " + pretty_type(*t));
  }

  void validate(const TypingDeriv& d, const std::string& at) const {
    const Type kInt = Type::int_(), kRat = Type::rat(), kBool = Type::bool_();
    if (d.rule != TypingRule::Sub && d.witness) fail(at, "only sub carries a subtyping witness");
    switch (d.rule) {
      case TypingRule::Var: {
        want_mode(d, Mode::Synth, at);
        want_kind(d, ExprKind::Var, at);
        want_arity(d, 0, at);
        auto t = d.ctx.lookup(d.expr.name());
        if (!t || *t != d.type) fail(at, "context does not assign " + d.expr.name() + " : " + pretty_type(d.type));
        return;
      }
      case TypingRule::ArrIntro: {
        want_mode(d, Mode::Check, at);
        want_kind(d, ExprKind::Lam, at);
        want_arity(d, 1, at);
        if (!d.type.is(TypeKind::Arr)) fail(at, "arr-intro concludes an arrow type");
        want_premise(d, 0, d.ctx.extend(d.expr.name(), d.type.domain()), d.expr.body(), Mode::Check,
                     &d.type.codomain(), at);
        return;
      }
      case TypingRule::ArrElim: {
        want_mode(d, Mode::Synth, at);
        want_kind(d, ExprKind::App, at);
        want_arity(d, 2, at);
        want_premise(d, 0, d.ctx, d.expr.fn(), Mode::Synth, nullptr, at);
        const Type& ft = d.premises[0].type;
        if (!ft.is(TypeKind::Arr) || ft.codomain() != d.type)
          fail(premise_path(at, 0), "function premise should have type _ -> " + pretty_type(d.type));
        want_premise(d, 1, d.ctx, d.expr.arg(), Mode::Check, &ft.domain(), at);
        return;
      }
      case TypingRule::Sub: {
        want_mode(d, Mode::Check, at);
        want_arity(d, 1, at);
        want_premise(d, 0, d.ctx, d.expr, Mode::Synth, nullptr, at);
        const Type& a = d.premises[0].type;
        if (!d.witness) fail(at, "sub is missing its subtyping witness");
        if (flavor_ == Flavor::Deep) {
          const auto* sd = std::get_if<SubDeriv>(&*d.witness);
          if (!sd) fail(at, "deep subsumption needs a :< derivation");
          try {
            auto [l, r] = check_sub_deriv(*sd);
            if (l != a || r != d.type) fail(at, "subtyping derivation concludes the wrong judgment");
          } catch (const SubDerivError& e) {
            fail(at, e.what());
          }
        } else {
          const auto* sw = std::get_if<ShallowWitness>(&*d.witness);
          if (!sw) fail(at, "shallow subsumption needs a :<: witness");
          if (sw->lhs != a || sw->rhs != d.type) fail(at, "shallow witness names the wrong types");
          if (!shallow_sub(a, d.type))
            fail(at, pretty_type(a) + " :<: " + pretty_type(d.type) + " does not hold");
        }
        return;
      }
      case TypingRule::Anno:
        want_mode(d, Mode::Synth, at);
        want_kind(d, ExprKind::Anno, at);
        want_arity(d, 1, at);
        if (d.type != d.expr.annotation()) fail(at, "anno concludes the annotated type");
        want_premise(d, 0, d.ctx, d.expr.subject(), Mode::Check, &d.type, at);
        return;
      case TypingRule::ProdIntro:
        want_mode(d, Mode::Check, at);
        want_kind(d, ExprKind::Pair, at);
        want_arity(d, 2, at);
        if (!d.type.is(TypeKind::Prod)) fail(at, "prod-intro concludes a product type");
        want_premise(d, 0, d.ctx, d.expr.first(), Mode::Check, &d.type.left(), at);
        want_premise(d, 1, d.ctx, d.expr.second(), Mode::Check, &d.type.right(), at);
        return;
      case TypingRule::ProdElim: {
        want_mode(d, Mode::Synth, at);
        want_kind(d, ExprKind::Proj, at);
        want_arity(d, 1, at);
        want_premise(d, 0, d.ctx, d.expr.subject(), Mode::Synth, nullptr, at);
        const Type& pt = d.premises[0].type;
        if (!pt.is(TypeKind::Prod)) fail(premise_path(at, 0), "projection premise is not a product");
        if ((d.expr.index() == 1 ? pt.left() : pt.right()) != d.type) fail(at, "projection picks the wrong component");
        return;
      }
      case TypingRule::IntIntro:
        want_mode(d, Mode::Synth, at);
        want_kind(d, ExprKind::IntLit, at);
        want_arity(d, 0, at);
        if (d.type != kInt) fail(at, "integer literal has type int");
        return;
      case TypingRule::BoolIntro:
        want_mode(d, Mode::Synth, at);
        want_kind(d, ExprKind::BoolLit, at);
        want_arity(d, 0, at);
        if (d.type != kBool) fail(at, "boolean literal has type bool");
        return;
      case TypingRule::IntOp:
      case TypingRule::RatOp: {
        bool is_int = d.rule == TypingRule::IntOp;
        want_mode(d, Mode::Synth, at);
        want_kind(d, ExprKind::BinOp, at);
        want_arity(d, 2, at);
        BinOpKind op = d.expr.op();
        // The declarative int rule also covers <; the bidirectional one does not.
        if (is_int && (op == BinOpKind::Div || (op == BinOpKind::Lt && !declarative_)))
          fail(at, "int-op does not type '" + std::string(binop_symbol(op)) + "'");
        const Type& operand = is_int ? kInt : kRat;
        const Type& result = op == BinOpKind::Lt ? kBool : operand;
        if (d.type != result) fail(at, "operator result should be " + pretty_type(result));
        want_premise(d, 0, d.ctx, d.expr.left(), Mode::Check, &operand, at);
        want_premise(d, 1, d.ctx, d.expr.right(), Mode::Check, &operand, at);
        return;
      }
      case TypingRule::BoolElim:
        want_mode(d, Mode::Check, at);
        want_kind(d, ExprKind::If, at);
        want_arity(d, 3, at);
        want_premise(d, 0, d.ctx, d.expr.cond(), Mode::Check, &kBool, at);
        want_premise(d, 1, d.ctx, d.expr.then_branch(), Mode::Check, &d.type, at);
        want_premise(d, 2, d.ctx, d.expr.else_branch(), Mode::Check, &d.type, at);
        return;
    }
    fail(at, "unknown rule");
  }

  Flavor flavor_;
  bool declarative_ = false;
};

}  // namespace

Synthesized synth(Flavor flavor, const Ctx& ctx, const Expr& e) { return Checker(flavor).synth(ctx, e, {}); }

TypingDeriv check(Flavor flavor, const Ctx& ctx, const Expr& e, const Type& against) {
  return Checker(flavor).check(ctx, e, against, {});
}

TypingDeriv erase_to_declarative(const TypingDeriv& d) {
  TypingDeriv out = d;
  out.mode.reset();
  for (auto& p : out.premises) p = erase_to_declarative(p);
  return out;
}

DerivVerdict check_typing_deriv(Flavor flavor, const TypingDeriv& d) {
  try {
    Validator(flavor).run(d);
    return {};
  } catch (const Invalid& bad) {
    return {false, bad.at, bad.reason};
  }
}

TypingDeriv weaken(const TypingDeriv& d, std::size_t at, const Ident& x, const Type& t) {
  TypingDeriv out = d;
  out.ctx = d.ctx.insert_at(at, x, t);
  for (auto& p : out.premises) p = weaken(p, at, x, t);
  return out;
}

SExpr typing_deriv_to_sexpr(const TypingDeriv& d) {
  std::vector<SExpr> items{SExpr::symbol(std::string(rule_name(d.rule)))};
  if (d.witness) {
    if (const auto* sd = std::get_if<SubDeriv>(&*d.witness)) {
      items.push_back(sub_deriv_to_sexpr(*sd));
    } else {
      const auto& sw = std::get<ShallowWitness>(*d.witness);
      items.push_back(SExpr::list({SExpr::symbol("shallow"), type_to_sexpr(sw.lhs), type_to_sexpr(sw.rhs)}));
    }
  }
  for (const auto& p : d.premises) items.push_back(typing_deriv_to_sexpr(p));
  return SExpr::list(std::move(items));
}

}  // namespace etaflat
