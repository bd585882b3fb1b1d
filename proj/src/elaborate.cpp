#include "etaflat/elaborate.hpp"

#include "etaflat/parse.hpp"

namespace etaflat {

namespace {

struct Built {
  Expr output;
  EtaTrace trace;
  std::optional<TypingDeriv> deriv;  // check-mode derivation, when a subject derivation was given
};

TypingDeriv make_node(TypingRule rule, const Ctx& ctx, const Expr& e, Mode mode, const Type& type,
                      std::vector<TypingDeriv> premises) {
  return TypingDeriv{rule, ctx, e, mode, type, std::move(premises), std::nullopt};
}

// Shallow expansion. `subject` (if present) derives ctx |- e => d.lhs();
// the result then carries ctx |- output <= d.rhs().
Built expand(const Expr& e, const std::optional<TypingDeriv>& subject, const SubDeriv& d, FreshSupply& fresh,
             const ElabOptions& opts) {
  if (d.is_leaf() || (opts.minimize && is_pure_refl(d))) {
    Built b{e, {}, std::nullopt};
    if (subject) {
      auto sub = make_node(TypingRule::Sub, subject->ctx, e, Mode::Check, d.rhs(), {*subject});
      sub.witness = ShallowWitness{d.lhs(), d.rhs()};
      b.deriv = std::move(sub);
    }
    return b;
  }

  if (d.rule() == SubRule::Arr) {
    const SubDeriv& dom = d.premises()[0];  // B1 :< A1
    const SubDeriv& cod = d.premises()[1];  // A2 :< B2
    const Type& b1 = d.rhs().domain();
    Ident x = fresh.next();

    std::optional<TypingDeriv> var_d, app_d;
    std::optional<Ctx> inner;
    if (subject) {
      inner = subject->ctx.extend(x, b1);
      var_d = make_node(TypingRule::Var, *inner, Expr::var(x), Mode::Synth, b1, {});
    }
    Built arg = expand(Expr::var(x), var_d, dom, fresh, opts);
    Expr app = Expr::app(e, arg.output);
    if (subject) {
      auto weakened = weaken(*subject, subject->ctx.size(), x, b1);
      app_d = make_node(TypingRule::ArrElim, *inner, app, Mode::Synth, d.lhs().codomain(),
                        {std::move(weakened), std::move(*arg.deriv)});
    }
    Built body = expand(app, app_d, cod, fresh, opts);

    Built out{Expr::lam(x, body.output), {}, std::nullopt};
    out.trace.append(body.trace, {Slot::LamBody});
    out.trace.append(arg.trace, {Slot::LamBody, Slot::AppArg});
    out.trace.steps.push_back({{}, EtaRule::Arr});
    if (subject)
      out.deriv = make_node(TypingRule::ArrIntro, subject->ctx, out.output, Mode::Check, d.rhs(), {std::move(*body.deriv)});
    return out;
  }

  // Prod
  std::vector<Built> parts;
  for (int k = 1; k <= 2; ++k) {
    Expr proj = Expr::proj(k, e);
    std::optional<TypingDeriv> proj_d;
    if (subject) {
      const Type& ak = k == 1 ? d.lhs().left() : d.lhs().right();
      proj_d = make_node(TypingRule::ProdElim, subject->ctx, proj, Mode::Synth, ak, {*subject});
    }
    parts.push_back(expand(proj, proj_d, d.premises()[k - 1], fresh, opts));
  }
  Built out{Expr::pair(parts[0].output, parts[1].output), {}, std::nullopt};
  out.trace.append(parts[0].trace, {Slot::PairFirst});
  out.trace.append(parts[1].trace, {Slot::PairSecond});
  out.trace.steps.push_back({{}, EtaRule::Prod});
  if (subject)
    out.deriv = make_node(TypingRule::ProdIntro, subject->ctx, out.output, Mode::Check, d.rhs(),
                          {std::move(*parts[0].deriv), std::move(*parts[1].deriv)});
  return out;
}

// Congruence over the deep derivation; expansion at each Sub node.
Built transform(const TypingDeriv& d, FreshSupply& fresh, const ElabOptions& opts) {
  if (d.rule == TypingRule::Sub) {
    Built inner = transform(d.premises.at(0), fresh, opts);
    const auto& sd = std::get<SubDeriv>(*d.witness);
    Built ex = expand(inner.output, inner.deriv, sd, fresh, opts);
    ex.trace.append(inner.trace);
    return ex;
  }
  std::vector<Expr> kids;
  std::vector<TypingDeriv> premises;
  EtaTrace trace;
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    Built c = transform(d.premises[i], fresh, opts);
    trace.append(c.trace, {slot_of(d.expr.kind(), i)});
    kids.push_back(std::move(c.output));
    premises.push_back(std::move(*c.deriv));
  }
  Expr out = kids.empty() ? d.expr : d.expr.with_children(std::move(kids));
  TypingDeriv nd = d;
  nd.expr = out;
  nd.premises = std::move(premises);
  return {out, std::move(trace), std::move(nd)};
}

FreshSupply supply_for(const Ctx& ctx, const Expr& e) {
  auto avoid = all_idents(e);
  for (const auto& [x, t] : ctx.bindings()) avoid.insert(x);
  return FreshSupply(std::move(avoid));
}

ElabResult elaborate(const Ctx& ctx, const Expr& e, Mode mode, TypingDeriv deep, ElabOptions opts) {
  FreshSupply fresh = supply_for(ctx, e);
  Built b = transform(deep, fresh, opts);
  Type type = deep.type;
  return ElabResult{e, ctx, mode, std::move(b.output), std::move(type), std::move(b.trace), std::move(*b.deriv),
                    std::move(deep), opts};
}

}  // namespace

Expansion expand_subtype(const Expr& e, const SubDeriv& d, FreshSupply& fresh, ElabOptions opts) {
  Built b = expand(e, std::nullopt, d, fresh, opts);
  return {std::move(b.output), std::move(b.trace)};
}

Expansion expand_subtype(const Expr& e, const SubDeriv& d, const std::set<Ident>& avoid, ElabOptions opts) {
  FreshSupply fresh(avoid);
  for (const auto& x : all_idents(e)) fresh.reserve(x);
  return expand_subtype(e, d, fresh, opts);
}

ElabResult flatten(const Ctx& ctx, const Expr& e, Mode mode, const std::optional<Type>& against, ElabOptions opts) {
  if ((mode == Mode::Check) != against.has_value())
    throw std::invalid_argument("flatten: a type is required exactly when checking");
  TypingDeriv deep = mode == Mode::Synth ? synth(Flavor::Deep, ctx, e).deriv : check(Flavor::Deep, ctx, e, *against);
  return elaborate(ctx, e, mode, std::move(deep), opts);
}

ElabResult minimize(const ElabResult& r) {
  ElabOptions opts = r.options;
  opts.minimize = true;
  return elaborate(r.ctx, r.source, r.mode, r.deep_deriv, opts);
}

SelfCheck self_verify(const ElabResult& r) {
  auto verdict = check_typing_deriv(Flavor::Shallow, r.deriv);
  if (!verdict) return {false, "shallow derivation invalid at " + verdict.at + ": " + verdict.reason};
  if (r.deriv.expr != r.output || r.deriv.ctx != r.ctx || r.deriv.mode != r.mode || r.deriv.type != r.type)
    return {false, "shallow derivation does not conclude the elaborated judgment"};
  try {
    if (r.mode == Mode::Synth) {
      Type t = synth(Flavor::Shallow, r.ctx, r.output).type;
      if (t != r.type)
        return {false, "shallow checker synthesizes " + pretty_type(t) + ", expected " + pretty_type(r.type)};
    } else {
      check(Flavor::Shallow, r.ctx, r.output, r.type);
    }
  } catch (const TypeError& e) {
    return {false, std::string("shallow checker rejects the output: ") + e.what()};
  }
  if (!verify_trace(r.output, r.trace, r.source)) return {false, "eta trace does not reduce the output to the source"};
  return {};
}

}  // namespace etaflat
