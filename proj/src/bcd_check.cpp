#include <algorithm>
#include <cctype>

#include "etaflat/bcd.hpp"

namespace etaflat::bcd {

std::string_view sub_rule_name(SubRule r) {
  switch (r) {
    case SubRule::Refl: return "refl";
    case SubRule::TopR: return "top-r";
    case SubRule::TopArr: return "top-arr";
    case SubRule::SectR: return "sect-r";
    case SubRule::SectL1: return "sect-l1";
    case SubRule::SectL2: return "sect-l2";
    case SubRule::Dist: return "dist";
    case SubRule::Trans: return "trans";
    case SubRule::SectCong: return "sect-cong";
    case SubRule::Arr: return "arr";
  }
  return "?";
}

std::string_view typing_rule_name(TypingRule r) {
  switch (r) {
    case TypingRule::Var: return "var";
    case TypingRule::ArrIntro: return "arr-intro";
    case TypingRule::ArrElim: return "arr-elim";
    case TypingRule::SectIntro: return "sect-intro";
    case TypingRule::SectElim1: return "sect-elim1";
    case TypingRule::SectElim2: return "sect-elim2";
    case TypingRule::TopIntro: return "top-intro";
    case TypingRule::Sub: return "sub";
    case TypingRule::BetaEta: return "beta-eta";
  }
  return "?";
}

// ------------------------------------------------------------ SubDeriv

SubDeriv SubDeriv::claim(SubRule rule, Type lhs, Type rhs, std::vector<SubDeriv> premises) {
  return SubDeriv(std::make_shared<const Node>(Node{rule, std::move(lhs), std::move(rhs), std::move(premises)}));
}

SubDeriv SubDeriv::refl(Type t) { return claim(SubRule::Refl, t, t, {}); }
SubDeriv SubDeriv::top_r(Type t) { return claim(SubRule::TopR, std::move(t), Type::top(), {}); }
SubDeriv SubDeriv::top_arr() { return claim(SubRule::TopArr, Type::top(), Type::arr(Type::top(), Type::top()), {}); }
SubDeriv SubDeriv::sect_r(Type t) { return claim(SubRule::SectR, t, Type::sect(t, t), {}); }
SubDeriv SubDeriv::sect_l1(Type s, Type t) { return claim(SubRule::SectL1, Type::sect(s, t), s, {}); }
SubDeriv SubDeriv::sect_l2(Type s, Type t) { return claim(SubRule::SectL2, Type::sect(s, t), t, {}); }
SubDeriv SubDeriv::dist(Type s, Type t1, Type t2) {
  return claim(SubRule::Dist, Type::sect(Type::arr(s, t1), Type::arr(s, t2)), Type::arr(s, Type::sect(t1, t2)), {});
}
SubDeriv SubDeriv::trans(SubDeriv first, SubDeriv second) {
  Type l = first.lhs(), r = second.rhs();
  return claim(SubRule::Trans, l, r, {std::move(first), std::move(second)});
}
SubDeriv SubDeriv::sect_cong(SubDeriv left, SubDeriv right) {
  Type l = Type::sect(left.lhs(), right.lhs()), r = Type::sect(left.rhs(), right.rhs());
  return claim(SubRule::SectCong, l, r, {std::move(left), std::move(right)});
}
SubDeriv SubDeriv::arr(SubDeriv dom, SubDeriv cod) {
  Type l = Type::arr(dom.rhs(), cod.lhs()), r = Type::arr(dom.lhs(), cod.rhs());
  return claim(SubRule::Arr, l, r, {std::move(dom), std::move(cod)});
}

namespace {

[[noreturn]] void sub_fail(const std::string& where, const SubDeriv& d, const std::string& why) {
  throw BcdError(BcdError::Kind::SchemaMismatch, where,
                 std::string(sub_rule_name(d.rule())) + " concluding " + show(d.lhs()) + " <= " + show(d.rhs()) +
                     ": " + why);
}

void check_sub_at(const SubDeriv& d, const std::string& where) {
  const Type& l = d.lhs();
  const Type& r = d.rhs();
  std::size_t arity = (d.rule() == SubRule::Trans || d.rule() == SubRule::SectCong || d.rule() == SubRule::Arr) ? 2 : 0;
  if (d.premises().size() != arity) sub_fail(where, d, "expected " + std::to_string(arity) + " premises");
  for (std::size_t i = 0; i < arity; ++i) check_sub_at(d.premises()[i], where + "/" + std::to_string(i));

  switch (d.rule()) {
    case SubRule::Refl:
      if (l != r) sub_fail(where, d, "sides differ");
      return;
    case SubRule::TopR:
      if (!r.is(TypeKind::Top)) sub_fail(where, d, "right side is not top");
      return;
    case SubRule::TopArr:
      if (!l.is(TypeKind::Top) || r != Type::arr(Type::top(), Type::top())) sub_fail(where, d, "expected top <= top -> top");
      return;
    case SubRule::SectR:
      if (r != Type::sect(l, l)) sub_fail(where, d, "right side is not the left side intersected with itself");
      return;
    case SubRule::SectL1:
      if (!l.is(TypeKind::Sect) || l.left() != r) sub_fail(where, d, "right side is not the first component");
      return;
    case SubRule::SectL2:
      if (!l.is(TypeKind::Sect) || l.right() != r) sub_fail(where, d, "right side is not the second component");
      return;
    case SubRule::Dist: {
      if (!l.is(TypeKind::Sect) || !l.left().is(TypeKind::Arr) || !l.right().is(TypeKind::Arr))
        sub_fail(where, d, "left side is not an intersection of arrows");
      if (l.left().left() != l.right().left()) sub_fail(where, d, "arrow domains differ");
      if (r != Type::arr(l.left().left(), Type::sect(l.left().right(), l.right().right())))
        sub_fail(where, d, "right side is not the distributed arrow");
      return;
    }
    case SubRule::Trans: {
      const auto& a = d.premises()[0];
      const auto& b = d.premises()[1];
      if (a.rhs() != b.lhs()) sub_fail(where, d, "middle types differ: " + show(a.rhs()) + " vs " + show(b.lhs()));
      if (a.lhs() != l || b.rhs() != r) sub_fail(where, d, "conclusion does not match premises");
      return;
    }
    case SubRule::SectCong: {
      const auto& a = d.premises()[0];
      const auto& b = d.premises()[1];
      if (l != Type::sect(a.lhs(), b.lhs()) || r != Type::sect(a.rhs(), b.rhs()))
        sub_fail(where, d, "conclusion does not match premises");
      return;
    }
    case SubRule::Arr: {
      const auto& dom = d.premises()[0];
      const auto& cod = d.premises()[1];
      if (l != Type::arr(dom.rhs(), cod.lhs()) || r != Type::arr(dom.lhs(), cod.rhs()))
        sub_fail(where, d, "conclusion does not match premises");
      return;
    }
  }
}

// ------------------------------------------------------------ typing

class TypingChecker {
 public:
  explicit TypingChecker(System system) : system_(system) {}

  void check(const TypingDeriv& d, const std::string& where) {
    const Judgment& j = d.concl;
    if (d.system != system_) fail(where, d, "system marker differs from the root");
    for (const auto& [x, t] : j.basis)
      if (x.empty()) throw BcdError(BcdError::Kind::LargeBasis, where, "basis entry does not bind a variable");
    for (std::size_t i = 0; i < d.premises.size(); ++i) check(d.premises[i], where + "/" + std::to_string(i));
    if (d.rule != TypingRule::Sub && d.sub) fail(where, d, "only sub nodes carry a subtyping derivation");
    if (d.rule != TypingRule::BetaEta && d.trace) fail(where, d, "only beta-eta nodes carry a trace");

    switch (d.rule) {
      case TypingRule::Var: {
        arity(d, 0, where);
        if (!j.subject.is(TermKind::Var)) fail(where, d, "subject is not a variable");
        auto t = lookup(j.basis, j.subject.name());
        if (!t) fail(where, d, "variable " + j.subject.name() + " is not in the basis");
        if (*t != j.type) fail(where, d, "basis gives " + show(*t));
        return;
      }
      case TypingRule::ArrIntro: {
        arity(d, 1, where);
        if (!j.subject.is(TermKind::Lam)) fail(where, d, "subject is not an abstraction");
        if (!j.type.is(TypeKind::Arr)) fail(where, d, "type is not an arrow");
        const Judgment& p = d.premises[0].concl;
        Basis ext = j.basis;
        ext.emplace_back(j.subject.name(), j.type.left());
        if (p.basis != ext) fail(where, d, "premise basis is not the extended basis");
        if (p.subject != j.subject.body()) fail(where, d, "premise subject is not the body");
        if (p.type != j.type.right()) fail(where, d, "premise type is not the codomain");
        return;
      }
      case TypingRule::ArrElim: {
        arity(d, 2, where);
        if (!j.subject.is(TermKind::App)) fail(where, d, "subject is not an application");
        const Judgment& f = d.premises[0].concl;
        const Judgment& a = d.premises[1].concl;
        same_basis(d, where);
        if (f.subject != j.subject.fn() || a.subject != j.subject.arg()) fail(where, d, "premise subjects do not match");
        if (f.type != Type::arr(a.type, j.type)) fail(where, d, "function premise type is not arg -> result");
        return;
      }
      case TypingRule::SectIntro: {
        arity(d, 2, where);
        same_basis(d, where);
        same_subject(d, where);
        if (j.type != Type::sect(d.premises[0].concl.type, d.premises[1].concl.type))
          fail(where, d, "type is not the intersection of the premise types");
        return;
      }
      case TypingRule::SectElim1:
      case TypingRule::SectElim2: {
        arity(d, 1, where);
        same_basis(d, where);
        same_subject(d, where);
        const Type& p = d.premises[0].concl.type;
        if (!p.is(TypeKind::Sect)) fail(where, d, "premise type is not an intersection");
        if ((d.rule == TypingRule::SectElim1 ? p.left() : p.right()) != j.type)
          fail(where, d, "type is not the selected component");
        return;
      }
      case TypingRule::TopIntro:
        arity(d, 0, where);
        if (!j.type.is(TypeKind::Top)) fail(where, d, "type is not top");
        return;
      case TypingRule::Sub: {
        if (system_ != System::Extended) fail(where, d, "sub is not a rule of the modified system");
        arity(d, 1, where);
        same_basis(d, where);
        same_subject(d, where);
        if (!d.sub) fail(where, d, "missing subtyping derivation");
        auto [l, r] = check_sub(*d.sub);
        if (l != d.premises[0].concl.type || r != j.type)
          fail(where, d, "subtyping derivation concludes " + show(l) + " <= " + show(r));
        return;
      }
      case TypingRule::BetaEta: {
        if (system_ != System::Modified) fail(where, d, "beta-eta is not a rule of the extended system");
        arity(d, 1, where);
        same_basis(d, where);
        if (!d.trace) fail(where, d, "missing reduction trace");
        Term reduct = [&] {
          try {
            return apply_trace(d.premises[0].concl.subject, *d.trace);
          } catch (const BcdError& e) {
            throw BcdError(BcdError::Kind::TraceReplay, where, e.what());
          }
        }();
        if (!alpha_eq(reduct, j.subject))
          throw BcdError(BcdError::Kind::TraceReplay, where, "trace reduces to " + show(reduct) + ", not " + show(j.subject));
        if (d.premises[0].concl.type != j.type) fail(where, d, "type differs from the premise type");
        return;
      }
    }
  }

 private:
  [[noreturn]] void fail(const std::string& where, const TypingDeriv& d, const std::string& why) {
    throw BcdError(BcdError::Kind::SchemaMismatch, where,
                   std::string(typing_rule_name(d.rule)) + " for " + show(d.concl.subject) + " : " +
                       show(d.concl.type) + ": " + why);
  }
  void arity(const TypingDeriv& d, std::size_t n, const std::string& where) {
    if (d.premises.size() != n) fail(where, d, "expected " + std::to_string(n) + " premises");
  }
  void same_basis(const TypingDeriv& d, const std::string& where) {
    for (const auto& p : d.premises)
      if (p.concl.basis != d.concl.basis) fail(where, d, "premise basis differs");
  }
  void same_subject(const TypingDeriv& d, const std::string& where) {
    for (const auto& p : d.premises)
      if (p.concl.subject != d.concl.subject) fail(where, d, "premise subject differs");
  }

  System system_;
};

void collect_traces(const TypingDeriv& d, std::vector<BetaEtaTrace>& out) {
  if (d.trace) out.push_back(*d.trace);
  for (const auto& p : d.premises) collect_traces(p, out);
}

bool is_var_name(const Ident& x) {
  if (x.empty() || !(std::isalpha(static_cast<unsigned char>(x[0])) || x[0] == '_')) return false;
  return std::all_of(x.begin(), x.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; });
}

bool bases_ok(const TypingDeriv& d, System s) {
  if (d.system != s) return false;
  for (const auto& [x, t] : d.concl.basis)
    if (!is_var_name(x)) return false;
  return std::all_of(d.premises.begin(), d.premises.end(), [s](const TypingDeriv& p) { return bases_ok(p, s); });
}

}  // namespace

std::pair<Type, Type> check_sub(const SubDeriv& d) {
  check_sub_at(d, ".");
  return {d.lhs(), d.rhs()};
}

std::size_t height(const SubDeriv& d) {
  std::size_t h = 0;
  for (const auto& p : d.premises()) h = std::max(h, height(p));
  return h + 1;
}

Judgment check_typing(const TypingDeriv& d) {
  TypingChecker(d.system).check(d, ".");
  return d.concl;
}

std::vector<BetaEtaTrace> traces_of(const TypingDeriv& d) {
  std::vector<BetaEtaTrace> out;
  collect_traces(d, out);
  return out;
}

bool well_formed_bases(const TypingDeriv& d) { return bases_ok(d, d.system); }

}  // namespace etaflat::bcd
