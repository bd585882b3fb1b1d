#include <algorithm>

#include "etaflat/bcd.hpp"

namespace etaflat::bcd {

Type Type::atom(Ident name) { return Type(std::make_shared<const Node>(Node{TypeKind::Atom, std::move(name), {}, {}})); }
Type Type::top() {
  static const Type t(std::make_shared<const Node>(Node{TypeKind::Top, {}, {}, {}}));
  return t;
}
Type Type::arr(Type from, Type to) {
  return Type(std::make_shared<const Node>(Node{TypeKind::Arr, {}, std::move(from), std::move(to)}));
}
Type Type::sect(Type left, Type right) {
  return Type(std::make_shared<const Node>(Node{TypeKind::Sect, {}, std::move(left), std::move(right)}));
}

const Type& Type::left() const {
  if (!node_->l) throw std::logic_error("bcd::Type::left on a leaf");
  return *node_->l;
}
const Type& Type::right() const {
  if (!node_->r) throw std::logic_error("bcd::Type::right on a leaf");
  return *node_->r;
}

int Type::depth() const {
  if (!node_->l) return 1;
  return 1 + std::max(node_->l->depth(), node_->r->depth());
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeKind::Atom: return a.name() == b.name();
    case TypeKind::Top: return true;
    default: return a.left() == b.left() && a.right() == b.right();
  }
}

bool operator<(const Type& a, const Type& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case TypeKind::Atom: return a.name() < b.name();
    case TypeKind::Top: return false;
    default:
      if (a.left() != b.left()) return a.left() < b.left();
      return a.right() < b.right();
  }
}

namespace {

void show_type(const Type& t, int need, std::string& out) {
  int own = t.is(TypeKind::Arr) ? 0 : t.is(TypeKind::Sect) ? 1 : 2;
  if (own < need) out += '(';
  switch (t.kind()) {
    case TypeKind::Atom: out += t.name(); break;
    case TypeKind::Top: out += "top"; break;
    case TypeKind::Arr:
      show_type(t.left(), 1, out);
      out += " -> ";
      show_type(t.right(), 0, out);
      break;
    case TypeKind::Sect:
      show_type(t.left(), 1, out);
      out += " & ";
      show_type(t.right(), 2, out);
      break;
  }
  if (own < need) out += ')';
}

void show_term(const Term& m, int need, std::string& out) {
  int own = m.is(TermKind::Lam) ? 0 : m.is(TermKind::App) ? 1 : 2;
  if (own < need) out += '(';
  switch (m.kind()) {
    case TermKind::Var: out += m.name(); break;
    case TermKind::Lam:
      out += '\\' + m.name() + ". ";
      show_term(m.body(), 0, out);
      break;
    case TermKind::App:
      show_term(m.fn(), 1, out);
      out += ' ';
      show_term(m.arg(), 2, out);
      break;
  }
  if (own < need) out += ')';
}

void collect_free(const Term& m, std::vector<Ident>& bound, std::set<Ident>& out) {
  switch (m.kind()) {
    case TermKind::Var:
      if (std::find(bound.begin(), bound.end(), m.name()) == bound.end()) out.insert(m.name());
      return;
    case TermKind::Lam:
      bound.push_back(m.name());
      collect_free(m.body(), bound, out);
      bound.pop_back();
      return;
    case TermKind::App:
      collect_free(m.fn(), bound, out);
      collect_free(m.arg(), bound, out);
  }
}

void collect_all(const Term& m, std::set<Ident>& out) {
  switch (m.kind()) {
    case TermKind::Var: out.insert(m.name()); return;
    case TermKind::Lam:
      out.insert(m.name());
      collect_all(m.body(), out);
      return;
    case TermKind::App:
      collect_all(m.fn(), out);
      collect_all(m.arg(), out);
  }
}

bool alpha_in(const Term& a, const Term& b, std::vector<Ident>& ba, std::vector<Ident>& bb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var: {
      auto ia = std::find(ba.rbegin(), ba.rend(), a.name());
      auto ib = std::find(bb.rbegin(), bb.rend(), b.name());
      if (ia == ba.rend() || ib == bb.rend()) return ia == ba.rend() && ib == bb.rend() && a.name() == b.name();
      return ia - ba.rbegin() == ib - bb.rbegin();
    }
    case TermKind::Lam: {
      ba.push_back(a.name());
      bb.push_back(b.name());
      bool r = alpha_in(a.body(), b.body(), ba, bb);
      ba.pop_back();
      bb.pop_back();
      return r;
    }
    case TermKind::App:
      return alpha_in(a.fn(), b.fn(), ba, bb) && alpha_in(a.arg(), b.arg(), ba, bb);
  }
  return false;
}

const Term& at_path(const Term& m, const Path& p, std::size_t d) {
  if (d == p.size()) return m;
  if (p[d] == Slot::LamBody && m.is(TermKind::Lam)) return at_path(m.body(), p, d + 1);
  if (p[d] == Slot::AppFn && m.is(TermKind::App)) return at_path(m.fn(), p, d + 1);
  if (p[d] == Slot::AppArg && m.is(TermKind::App)) return at_path(m.arg(), p, d + 1);
  throw BcdError(BcdError::Kind::TraceReplay, path_to_string(p), "path does not address a subterm");
}

Term replace_path(const Term& m, const Path& p, std::size_t d, const Term& with) {
  if (d == p.size()) return with;
  switch (p[d]) {
    case Slot::LamBody: return Term::lam(m.name(), replace_path(m.body(), p, d + 1, with));
    case Slot::AppFn: return Term::app(replace_path(m.fn(), p, d + 1, with), m.arg());
    case Slot::AppArg: return Term::app(m.fn(), replace_path(m.arg(), p, d + 1, with));
    default: throw BcdError(BcdError::Kind::TraceReplay, path_to_string(p), "path does not address a subterm");
  }
}

}  // namespace

std::string show(const Type& t) {
  std::string out;
  show_type(t, 0, out);
  return out;
}

Term Term::var(Ident x) { return Term(std::make_shared<const Node>(Node{TermKind::Var, std::move(x), {}})); }
Term Term::lam(Ident x, Term body) {
  return Term(std::make_shared<const Node>(Node{TermKind::Lam, std::move(x), {std::move(body)}}));
}
Term Term::app(Term fn, Term arg) {
  return Term(std::make_shared<const Node>(Node{TermKind::App, {}, {std::move(fn), std::move(arg)}}));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() && a.node_->kids == b.node_->kids;
}

std::string show(const Term& m) {
  std::string out;
  show_term(m, 0, out);
  return out;
}

std::set<Ident> free_vars(const Term& m) {
  std::set<Ident> out;
  std::vector<Ident> bound;
  collect_free(m, bound, out);
  return out;
}

std::set<Ident> all_idents(const Term& m) {
  std::set<Ident> out;
  collect_all(m, out);
  return out;
}

bool alpha_eq(const Term& a, const Term& b) {
  std::vector<Ident> ba, bb;
  return alpha_in(a, b, ba, bb);
}

Term subst(const Term& m, const Ident& x, const Term& n) {
  switch (m.kind()) {
    case TermKind::Var:
      return m.name() == x ? n : m;
    case TermKind::App:
      return Term::app(subst(m.fn(), x, n), subst(m.arg(), x, n));
    case TermKind::Lam: {
      if (m.name() == x) return m;
      auto fv_n = free_vars(n);
      if (fv_n.count(m.name()) && free_vars(m.body()).count(x)) {
        auto avoid = fv_n;
        auto body_names = all_idents(m.body());
        avoid.insert(body_names.begin(), body_names.end());
        avoid.insert(x);
        Ident z = fresh_var(avoid);
        return Term::lam(z, subst(subst(m.body(), m.name(), Term::var(z)), x, n));
      }
      return Term::lam(m.name(), subst(m.body(), x, n));
    }
  }
  return m;
}

Term reduce_step(const Term& m, const ReductionStep& s) {
  const Term& redex = at_path(m, s.at, 0);
  auto where = path_to_string(s.at);
  if (s.rule == ReductionRule::Eta) {
    if (!redex.is(TermKind::Lam) || !redex.body().is(TermKind::App) || !redex.body().arg().is(TermKind::Var) ||
        redex.body().arg().name() != redex.name())
      throw BcdError(BcdError::Kind::TraceReplay, where, "not an eta redex: " + show(redex));
    if (free_vars(redex.body().fn()).count(redex.name()))
      throw BcdError(BcdError::Kind::TraceReplay, where, "eta side condition fails: " + show(redex));
    return replace_path(m, s.at, 0, redex.body().fn());
  }
  if (!redex.is(TermKind::App) || !redex.fn().is(TermKind::Lam))
    throw BcdError(BcdError::Kind::TraceReplay, where, "not a beta redex: " + show(redex));
  return replace_path(m, s.at, 0, subst(redex.fn().body(), redex.fn().name(), redex.arg()));
}

Term apply_trace(const Term& m, const BetaEtaTrace& t) {
  Term cur = m;
  for (const auto& s : t) cur = reduce_step(cur, s);
  return cur;
}

std::size_t count_beta(const BetaEtaTrace& t) {
  return static_cast<std::size_t>(
      std::count_if(t.begin(), t.end(), [](const ReductionStep& s) { return s.rule == ReductionRule::Beta; }));
}

BcdError::BcdError(Kind kind, std::string where, const std::string& message)
    : std::runtime_error("at " + where + ": " + message), kind_(kind), where_(std::move(where)) {}

std::optional<Type> lookup(const Basis& b, const Ident& x) {
  for (auto it = b.rbegin(); it != b.rend(); ++it)
    if (it->first == x) return it->second;
  return std::nullopt;
}

std::size_t TypingDeriv::size() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

}  // namespace etaflat::bcd
