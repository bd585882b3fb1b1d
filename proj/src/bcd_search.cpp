#include <map>
#include <tuple>

#include "etaflat/bcd.hpp"

namespace etaflat::bcd {

namespace {

void subterms(const Type& t, std::set<Type>& out) {
  out.insert(t);
  if (t.is(TypeKind::Arr) || t.is(TypeKind::Sect)) {
    subterms(t.left(), out);
    subterms(t.right(), out);
  }
}

class Search {
 public:
  std::optional<SubDeriv> find(const Type& s, const Type& t, int depth) {
    auto key = std::make_tuple(s, t, depth);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto r = attempt(s, t, depth);
    memo_.emplace(std::move(key), r);
    return r;
  }

 private:
  std::optional<SubDeriv> attempt(const Type& s, const Type& t, int depth) {
    if (depth < 1) return std::nullopt;
    if (s == t) return SubDeriv::refl(s);
    if (t.is(TypeKind::Top)) return SubDeriv::top_r(s);
    if (s.is(TypeKind::Top) && t == Type::arr(Type::top(), Type::top())) return SubDeriv::top_arr();
    if (t == Type::sect(s, s)) return SubDeriv::sect_r(s);
    if (s.is(TypeKind::Sect)) {
      if (s.left() == t) return SubDeriv::sect_l1(s.left(), s.right());
      if (s.right() == t) return SubDeriv::sect_l2(s.left(), s.right());
      if (auto img = dist_image(s); img && *img == t)
        return SubDeriv::dist(s.left().left(), s.left().right(), s.right().right());
    }
    if (depth < 2) return std::nullopt;

    if (s.is(TypeKind::Sect) && t.is(TypeKind::Sect)) {
      auto l = find(s.left(), t.left(), depth - 1);
      auto r = l ? find(s.right(), t.right(), depth - 1) : std::nullopt;
      if (l && r) return SubDeriv::sect_cong(*l, *r);
    }
    if (s.is(TypeKind::Arr) && t.is(TypeKind::Arr)) {
      auto dom = find(t.left(), s.left(), depth - 1);
      auto cod = dom ? find(s.right(), t.right(), depth - 1) : std::nullopt;
      if (dom && cod) return SubDeriv::arr(*dom, *cod);
    }
    for (const Type& mid : candidates(s, t)) {
      if (mid == s || mid == t) continue;
      auto a = find(s, mid, depth - 1);
      if (!a) continue;
      auto b = find(mid, t, depth - 1);
      if (b) return SubDeriv::trans(*a, *b);
    }
    return std::nullopt;
  }

  static std::optional<Type> dist_image(const Type& s) {
    if (!s.is(TypeKind::Sect) || !s.left().is(TypeKind::Arr) || !s.right().is(TypeKind::Arr)) return std::nullopt;
    if (s.left().left() != s.right().left()) return std::nullopt;
    return Type::arr(s.left().left(), Type::sect(s.left().right(), s.right().right()));
  }

  static std::set<Type> candidates(const Type& s, const Type& t) {
    std::set<Type> out;
    subterms(s, out);
    subterms(t, out);
    out.insert(Type::top());
    out.insert(Type::arr(Type::top(), Type::top()));
    out.insert(Type::sect(s, s));
    if (auto img = dist_image(s)) out.insert(*img);
    return out;
  }

  std::map<std::tuple<Type, Type, int>, std::optional<SubDeriv>> memo_;
};

}  // namespace

std::optional<SubDeriv> sub_search(const Type& sigma, const Type& tau, int max_depth) {
  Search search;
  for (int d = 1; d <= max_depth; ++d)
    if (auto r = search.find(sigma, tau, d)) return r;
  return std::nullopt;
}

}  // namespace etaflat::bcd
