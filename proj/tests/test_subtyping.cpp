#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "etaflat/parse.hpp"
#include "etaflat/subtyping.hpp"
#include "gen.hpp"

using namespace etaflat;

namespace {

Type T(const char* s) { return parse_type(s); }

// Reference relation written directly from the rules, independent of deep_sub.
bool sub_oracle(const Type& a, const Type& b) {
  if (a.is_atomic() && b.is_atomic()) return a == b || (a.is(TypeKind::Int) && b.is(TypeKind::Rat));
  if (a.is(TypeKind::Arr) && b.is(TypeKind::Arr))
    return sub_oracle(b.domain(), a.domain()) && sub_oracle(a.codomain(), b.codomain());
  if (a.is(TypeKind::Prod) && b.is(TypeKind::Prod))
    return sub_oracle(a.left(), b.left()) && sub_oracle(a.right(), b.right());
  return false;
}

}  // namespace

TEST_CASE("deep subtyping examples") {
  CHECK(deep_sub(T("rat -> bool"), T("int -> bool")));
  CHECK_FALSE(deep_sub(T("rat"), T("int")));
  CHECK_FALSE(deep_sub(T("int -> bool"), T("rat -> bool")));
  CHECK(deep_sub(T("int * int"), T("rat * int")));
  CHECK_FALSE(deep_sub(T("int * int"), T("int -> int")));
  auto d = deep_sub(T("int -> int"), T("int -> rat"));
  REQUIRE(d);
  CHECK(d->rule() == SubRule::Arr);
  CHECK(d->premises()[0].rule() == SubRule::ReflInt);
  CHECK(d->premises()[1].rule() == SubRule::IntRat);
}

TEST_CASE("shallow subtyping is head-only") {
  CHECK(shallow_sub(T("int"), T("rat")));
  CHECK(shallow_sub(T("int -> int"), T("int -> int")));
  CHECK_FALSE(shallow_sub(T("int -> int"), T("int -> rat")));
  CHECK_FALSE(shallow_sub(T("rat"), T("int")));
}

TEST_CASE("deep_sub matches the reference relation and its derivations check") {
  auto types = testgen::all_types(2);
  for (const auto& a : types)
    for (const auto& b : types) {
      auto d = deep_sub(a, b);
      CHECK(d.has_value() == sub_oracle(a, b));
      if (d) CHECK(check_sub_deriv(*d) == std::make_pair(a, b));
    }
}

TEST_CASE("derivation checker rejects bad claims") {
  auto bad = SubDeriv::claim(SubRule::IntRat, T("rat"), T("int"), {});
  CHECK_THROWS_AS(check_sub_deriv(bad), SubDerivError);
  auto inner = SubDeriv::claim(SubRule::ReflInt, T("int"), T("rat"), {});
  auto outer = SubDeriv::arr(SubDeriv::refl_int(), inner);
  try {
    check_sub_deriv(outer);
    FAIL("expected rejection");
  } catch (const SubDerivError& e) {
    CHECK(e.path() == "cod");
  }
  auto wrong_root = SubDeriv::claim(SubRule::Arr, T("int -> int"), T("int -> int"),
                                    {SubDeriv::refl_int(), SubDeriv::int_rat()});
  CHECK_THROWS_AS(check_sub_deriv(wrong_root), SubDerivError);
}

TEST_CASE("counting and purity") {
  auto d = *deep_sub(T("(int -> rat) -> int"), T("(rat -> int) -> int"));
  CHECK(count_rule(d, SubRule::Arr) == 2);
  CHECK(count_rule(d, SubRule::IntRat) == 2);
  CHECK(height(d) == 3);
  CHECK_FALSE(is_pure_refl(d));
  CHECK(is_pure_refl(*deep_sub(T("int * (bool -> rat)"), T("int * (bool -> rat)"))));
}

TEST_CASE("s-expression round trip") {
  for (const auto& d : testgen::all_sub_derivs(2)) {
    auto s = sub_deriv_to_sexpr(d);
    CHECK(sub_deriv_from_sexpr(parse_sexpr(s.str())) == d);
  }
  CHECK(sub_deriv_to_sexpr(*deep_sub(T("rat -> bool"), T("int -> bool"))).str() == "(arr (int-rat) (refl-bool))");
  for (const auto& t : testgen::all_types(2)) CHECK(type_from_sexpr(type_to_sexpr(t)) == t);
  CHECK_THROWS_AS(sub_deriv_from_sexpr(parse_sexpr("(arr (int-rat))")), SExprError);
}
