#include <cctype>

#include "etaflat/bcd.hpp"

namespace etaflat::bcd {

namespace {

SExpr sym(std::string s) { return SExpr::symbol(std::move(s)); }

Ident ident_from(const SExpr& s) {
  if (!s.is_symbol()) sexpr_fail(s, "expected a variable name, got " + s.str());
  const auto& t = s.text();
  bool ok = !t.empty() && (std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_');
  for (char c : t) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'');
  if (!ok) sexpr_fail(s, "bad variable name '" + t + "'");
  return t;
}

void expect_size(const SExpr& s, std::size_t n) {
  if (s.size() != n) sexpr_fail(s, "'" + std::string(s.head()) + "' takes " + std::to_string(n - 1) + " arguments");
}

std::optional<SubRule> sub_rule_from(std::string_view name) {
  for (SubRule r : kAllSubRules)
    if (sub_rule_name(r) == name) return r;
  return std::nullopt;
}

std::optional<TypingRule> typing_rule_from(std::string_view name) {
  for (TypingRule r : {TypingRule::Var, TypingRule::ArrIntro, TypingRule::ArrElim, TypingRule::SectIntro,
                       TypingRule::SectElim1, TypingRule::SectElim2, TypingRule::TopIntro, TypingRule::Sub,
                       TypingRule::BetaEta})
    if (typing_rule_name(r) == name) return r;
  return std::nullopt;
}

SExpr node_to_sexpr(const TypingDeriv& d) {
  std::vector<SExpr> basis{sym("basis")};
  for (const auto& [x, t] : d.concl.basis) basis.push_back(SExpr::list({sym(x), to_sexpr(t)}));
  std::vector<SExpr> items{sym(std::string(typing_rule_name(d.rule))), SExpr::list(std::move(basis)),
                           to_sexpr(d.concl.subject), to_sexpr(d.concl.type)};
  if (d.sub) items.push_back(to_sexpr(*d.sub));
  if (d.trace) {
    std::vector<SExpr> steps{sym("steps")};
    for (const auto& s : *d.trace)
      steps.push_back(SExpr::list({sym("step"), sym(path_to_string(s.at)), sym(s.rule == ReductionRule::Eta ? "eta" : "beta")}));
    items.push_back(SExpr::list(std::move(steps)));
  }
  for (const auto& p : d.premises) items.push_back(node_to_sexpr(p));
  return SExpr::list(std::move(items));
}

BetaEtaTrace trace_from(const SExpr& s) {
  BetaEtaTrace t;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const SExpr& st = s[i];
    if (st.head() != "step" || st.size() != 3 || !st[1].is_symbol() || !st[2].is_symbol())
      sexpr_fail(st, "expected (step <path> eta|beta)");
    Path p;
    try {
      p = path_from_string(st[1].text());
    } catch (const std::invalid_argument& e) {
      sexpr_fail(st[1], e.what());
    }
    for (Slot slot : p)
      if (slot != Slot::LamBody && slot != Slot::AppFn && slot != Slot::AppArg)
        sexpr_fail(st[1], "selector '" + std::string(slot_name(slot)) + "' does not apply to pure terms");
    const auto& r = st[2].text();
    if (r != "eta" && r != "beta") sexpr_fail(st[2], "unknown reduction '" + r + "'");
    t.push_back({std::move(p), r == "eta" ? ReductionRule::Eta : ReductionRule::Beta});
  }
  return t;
}

TypingDeriv node_from(const SExpr& s, System system) {
  if (!s.is_list() || s.size() < 4) sexpr_fail(s, "expected (rule (basis ...) term type ...)");
  auto rule = typing_rule_from(s.head());
  if (!rule) sexpr_fail(s, "unknown typing rule '" + std::string(s.head()) + "'");
  const SExpr& b = s[1];
  if (b.head() != "basis") sexpr_fail(b, "expected (basis (x type) ...)");
  Basis basis;
  for (std::size_t i = 1; i < b.size(); ++i) {
    const SExpr& entry = b[i];
    if (!entry.is_list() || entry.size() != 2) sexpr_fail(entry, "expected (x type)");
    if (!entry[0].is_symbol())
      throw BcdError(BcdError::Kind::LargeBasis, "line " + std::to_string(entry.line()),
                     "basis entry binds the term " + entry[0].str() + ", not a variable");
    basis.emplace_back(ident_from(entry[0]), type_from_sexpr(entry[1]));
  }
  TypingDeriv d{system, *rule, Judgment{std::move(basis), term_from_sexpr(s[2]), type_from_sexpr(s[3])}, {}, {}, {}};
  std::size_t next = 4;
  if (*rule == TypingRule::Sub) {
    if (s.size() <= next) sexpr_fail(s, "sub needs a subtyping derivation");
    d.sub = sub_from_sexpr(s[next++]);
  } else if (*rule == TypingRule::BetaEta) {
    if (s.size() <= next || s[next].head() != "steps") sexpr_fail(s, "beta-eta needs (steps ...)");
    d.trace = trace_from(s[next++]);
  }
  for (; next < s.size(); ++next) d.premises.push_back(node_from(s[next], system));
  return d;
}

}  // namespace

SExpr to_sexpr(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Atom: return SExpr::list({sym("atom"), sym(t.name())});
    case TypeKind::Top: return sym("top");
    case TypeKind::Arr: return SExpr::list({sym("arr"), to_sexpr(t.left()), to_sexpr(t.right())});
    case TypeKind::Sect: return SExpr::list({sym("sect"), to_sexpr(t.left()), to_sexpr(t.right())});
  }
  return sym("?");
}

SExpr to_sexpr(const Term& m) {
  switch (m.kind()) {
    case TermKind::Var: return SExpr::list({sym("var"), sym(m.name())});
    case TermKind::Lam: return SExpr::list({sym("lam"), sym(m.name()), to_sexpr(m.body())});
    case TermKind::App: return SExpr::list({sym("app"), to_sexpr(m.fn()), to_sexpr(m.arg())});
  }
  return sym("?");
}

SExpr to_sexpr(const SubDeriv& d) {
  std::vector<SExpr> items{sym(std::string(sub_rule_name(d.rule())))};
  switch (d.rule()) {
    case SubRule::Refl:
    case SubRule::TopR:
    case SubRule::SectR:
      items.push_back(to_sexpr(d.lhs()));
      break;
    case SubRule::TopArr:
      break;
    case SubRule::SectL1:
    case SubRule::SectL2:
      items.push_back(to_sexpr(d.lhs().left()));
      items.push_back(to_sexpr(d.lhs().right()));
      break;
    case SubRule::Dist:
      items.push_back(to_sexpr(d.lhs().left().left()));
      items.push_back(to_sexpr(d.lhs().left().right()));
      items.push_back(to_sexpr(d.lhs().right().right()));
      break;
    default:
      for (const auto& p : d.premises()) items.push_back(to_sexpr(p));
  }
  return SExpr::list(std::move(items));
}

SExpr to_sexpr(const TypingDeriv& d) {
  return SExpr::list({sym(d.system == System::Extended ? "extended" : "modified"), node_to_sexpr(d)});
}

Type type_from_sexpr(const SExpr& s) {
  if (s.is_symbol()) {
    if (s.text() == "top") return Type::top();
    sexpr_fail(s, "unknown type '" + s.text() + "'");
  }
  if (s.head() == "atom") {
    expect_size(s, 2);
    return Type::atom(ident_from(s[1]));
  }
  if (s.head() == "arr") {
    expect_size(s, 3);
    return Type::arr(type_from_sexpr(s[1]), type_from_sexpr(s[2]));
  }
  if (s.head() == "sect") {
    expect_size(s, 3);
    return Type::sect(type_from_sexpr(s[1]), type_from_sexpr(s[2]));
  }
  sexpr_fail(s, "malformed type " + s.str());
}

Term term_from_sexpr(const SExpr& s) {
  if (s.head() == "var") {
    expect_size(s, 2);
    return Term::var(ident_from(s[1]));
  }
  if (s.head() == "lam") {
    expect_size(s, 3);
    return Term::lam(ident_from(s[1]), term_from_sexpr(s[2]));
  }
  if (s.head() == "app") {
    expect_size(s, 3);
    return Term::app(term_from_sexpr(s[1]), term_from_sexpr(s[2]));
  }
  sexpr_fail(s, "malformed term " + s.str());
}

SubDeriv sub_from_sexpr(const SExpr& s) {
  auto rule = s.is_list() ? sub_rule_from(s.head()) : std::nullopt;
  if (!rule) sexpr_fail(s, "unknown subtyping rule in " + s.str());
  auto ty = [&](std::size_t i) { return type_from_sexpr(s[i]); };
  auto sub = [&](std::size_t i) { return sub_from_sexpr(s[i]); };
  switch (*rule) {
    case SubRule::Refl: expect_size(s, 2); return SubDeriv::refl(ty(1));
    case SubRule::TopR: expect_size(s, 2); return SubDeriv::top_r(ty(1));
    case SubRule::TopArr: expect_size(s, 1); return SubDeriv::top_arr();
    case SubRule::SectR: expect_size(s, 2); return SubDeriv::sect_r(ty(1));
    case SubRule::SectL1: expect_size(s, 3); return SubDeriv::sect_l1(ty(1), ty(2));
    case SubRule::SectL2: expect_size(s, 3); return SubDeriv::sect_l2(ty(1), ty(2));
    case SubRule::Dist: expect_size(s, 4); return SubDeriv::dist(ty(1), ty(2), ty(3));
    case SubRule::Trans: expect_size(s, 3); return SubDeriv::trans(sub(1), sub(2));
    case SubRule::SectCong: expect_size(s, 3); return SubDeriv::sect_cong(sub(1), sub(2));
    case SubRule::Arr: expect_size(s, 3); return SubDeriv::arr(sub(1), sub(2));
  }
  sexpr_fail(s, "unknown subtyping rule");
}

TypingDeriv typing_from_sexpr(const SExpr& s) {
  if (s.size() != 2 || (s.head() != "extended" && s.head() != "modified"))
    sexpr_fail(s, "expected (extended NODE) or (modified NODE)");
  return node_from(s[1], s.head() == "extended" ? System::Extended : System::Modified);
}

}  // namespace etaflat::bcd
