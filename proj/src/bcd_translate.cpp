#include "etaflat/bcd.hpp"

namespace etaflat::bcd {

namespace {

void names_in(const TypingDeriv& d, std::set<Ident>& out) {
  for (const auto& [x, t] : d.concl.basis) out.insert(x);
  auto ids = all_idents(d.concl.subject);
  out.insert(ids.begin(), ids.end());
  for (const auto& p : d.premises) names_in(p, out);
}

TypingDeriv node(TypingRule rule, const Basis& basis, const Term& m, const Type& t, std::vector<TypingDeriv> premises) {
  return TypingDeriv{System::Modified, rule, Judgment{basis, m, t}, std::move(premises), std::nullopt, std::nullopt};
}

// Free x becomes y; y must be fresh.
Term rename_free(const Term& m, const Ident& x, const Ident& y) {
  switch (m.kind()) {
    case TermKind::Var: return m.name() == x ? Term::var(y) : m;
    case TermKind::App: return Term::app(rename_free(m.fn(), x, y), rename_free(m.arg(), x, y));
    case TermKind::Lam: return m.name() == x ? m : Term::lam(m.name(), rename_free(m.body(), x, y));
  }
  return m;
}

// Binders named x, with what they bind, become y.
Term rename_bound(const Term& m, const Ident& x, const Ident& y) {
  switch (m.kind()) {
    case TermKind::Var: return m;
    case TermKind::App: return Term::app(rename_bound(m.fn(), x, y), rename_bound(m.arg(), x, y));
    case TermKind::Lam: {
      Term body = rename_bound(m.body(), x, y);
      if (m.name() == x) return Term::lam(y, rename_free(body, x, y));
      return Term::lam(m.name(), body);
    }
  }
  return m;
}

TypingDeriv weaken_with(const TypingDeriv& d, std::size_t root, const Ident& x, const Ident& y, const Type& t) {
  TypingDeriv out = d;
  bool inner_x = false;
  Basis basis;
  for (std::size_t i = 0; i < d.concl.basis.size(); ++i) {
    auto entry = d.concl.basis[i];
    if (i == root) basis.emplace_back(x, t);
    if (i >= root && entry.first == x) {
      entry.first = y;
      inner_x = true;
    }
    basis.push_back(std::move(entry));
  }
  if (d.concl.basis.size() == root) basis.emplace_back(x, t);
  Term subject = rename_bound(d.concl.subject, x, y);
  if (inner_x) subject = rename_free(subject, x, y);
  out.concl.basis = std::move(basis);
  out.concl.subject = std::move(subject);
  for (auto& p : out.premises) p = weaken_with(p, root, x, y, t);
  return out;
}

class Translator {
 public:
  explicit Translator(std::set<Ident> avoid) : fresh_(std::move(avoid)) {}

  TypingDeriv core(const SubDeriv& s, const TypingDeriv& d) {
    const Basis& basis = d.concl.basis;
    const Term& m = d.concl.subject;
    const Type& tau = s.rhs();
    switch (s.rule()) {
      case SubRule::Refl:
        return d;
      case SubRule::TopR:
        return node(TypingRule::TopIntro, basis, m, Type::top(), {});
      case SubRule::TopArr: {
        Ident x = fresh_.next();
        Basis bx = extend(basis, x, Type::top());
        Term mx = Term::app(m, Term::var(x));
        auto top = node(TypingRule::TopIntro, bx, mx, Type::top(), {});
        return close(basis, m, x, tau, std::move(top));
      }
      case SubRule::Arr: {
        const SubDeriv& dom = s.premises()[0];  // tau1 <= sigma1
        const SubDeriv& cod = s.premises()[1];  // sigma2 <= tau2
        Ident x = fresh_.next();
        const Type& tau1 = tau.left();
        Basis bx = extend(basis, x, tau1);
        auto fn = weaken(d, x, tau1);
        auto arg = core(dom, node(TypingRule::Var, bx, Term::var(x), tau1, {}));
        Term mx = Term::app(m, Term::var(x));
        auto app = node(TypingRule::ArrElim, bx, mx, s.lhs().right(), {std::move(fn), std::move(arg)});
        return close(basis, m, x, tau, core(cod, app));
      }
      case SubRule::SectR:
        return node(TypingRule::SectIntro, basis, m, tau, {d, d});
      case SubRule::SectL1:
        return node(TypingRule::SectElim1, basis, m, tau, {d});
      case SubRule::SectL2:
        return node(TypingRule::SectElim2, basis, m, tau, {d});
      case SubRule::Dist: {
        const Type& sigma = tau.left();
        Ident x = fresh_.next();
        Basis bx = extend(basis, x, sigma);
        Term mx = Term::app(m, Term::var(x));
        std::vector<TypingDeriv> halves;
        for (TypingRule elim : {TypingRule::SectElim1, TypingRule::SectElim2}) {
          const Type& arrow = elim == TypingRule::SectElim1 ? s.lhs().left() : s.lhs().right();
          auto e = node(elim, basis, m, arrow, {d});
          auto fn = weaken(e, x, sigma);
          halves.push_back(node(TypingRule::ArrElim, bx, mx, arrow.right(),
                                {std::move(fn), node(TypingRule::Var, bx, Term::var(x), sigma, {})}));
        }
        auto both = node(TypingRule::SectIntro, bx, mx, tau.right(), std::move(halves));
        return close(basis, m, x, tau, std::move(both));
      }
      case SubRule::Trans:
        return core(s.premises()[1], core(s.premises()[0], d));
      case SubRule::SectCong: {
        auto l = core(s.premises()[0], node(TypingRule::SectElim1, basis, m, s.lhs().left(), {d}));
        auto r = core(s.premises()[1], node(TypingRule::SectElim2, basis, m, s.lhs().right(), {d}));
        return node(TypingRule::SectIntro, basis, m, tau, {std::move(l), std::move(r)});
      }
    }
    return d;
  }

  TypingDeriv lemma(const TypingDeriv& d) {
    std::vector<TypingDeriv> premises;
    for (const auto& p : d.premises) premises.push_back(lemma(p));
    if (d.rule == TypingRule::Sub) return core(*d.sub, premises.at(0));
    TypingDeriv out = d;
    out.system = System::Modified;
    out.premises = std::move(premises);
    return out;
  }

 private:
  static Basis extend(Basis b, const Ident& x, const Type& t) {
    b.emplace_back(x, t);
    return b;
  }

  // body derives basis, x |-* M x : tau.right(); closes with abstraction and
  // a single root eta step back to M.
  TypingDeriv close(const Basis& basis, const Term& m, const Ident& x, const Type& tau, TypingDeriv body) {
    Term lam = Term::lam(x, Term::app(m, Term::var(x)));
    auto intro = node(TypingRule::ArrIntro, basis, lam, tau, {std::move(body)});
    auto out = node(TypingRule::BetaEta, basis, m, tau, {std::move(intro)});
    out.trace = BetaEtaTrace{ReductionStep{{}, ReductionRule::Eta}};
    return out;
  }

  FreshSupply fresh_;
};

void require_modified(const TypingDeriv& d) {
  if (d.system != System::Modified)
    throw BcdError(BcdError::Kind::Precondition, ".", "expected a derivation of the modified system");
}

}  // namespace

TypingDeriv weaken(const TypingDeriv& d, const Ident& x, const Type& t) {
  if (lookup(d.concl.basis, x)) throw BcdError(BcdError::Kind::Precondition, ".", x + " is already bound in the basis");
  std::set<Ident> avoid{x};
  names_in(d, avoid);
  Ident y = fresh_var(avoid);
  return weaken_with(d, d.concl.basis.size(), x, y, t);
}

TypingDeriv core42(const SubDeriv& sub, const TypingDeriv& d) {
  check_sub(sub);
  require_modified(d);
  Judgment j = check_typing(d);
  if (j.type != sub.lhs())
    throw BcdError(BcdError::Kind::Precondition, ".",
                   "derivation type " + show(j.type) + " is not the subtyping's left side " + show(sub.lhs()));
  std::set<Ident> avoid;
  names_in(d, avoid);
  return Translator(std::move(avoid)).core(sub, d);
}

TypingDeriv lemma42(const TypingDeriv& d) {
  if (d.system != System::Extended)
    throw BcdError(BcdError::Kind::Precondition, ".", "expected a derivation of the extended system");
  check_typing(d);
  std::set<Ident> avoid;
  names_in(d, avoid);
  return Translator(std::move(avoid)).lemma(d);
}

}  // namespace etaflat::bcd
