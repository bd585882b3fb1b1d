#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "etaflat/parse.hpp"
#include "etaflat/typing.hpp"
#include "gen.hpp"

using namespace etaflat;

namespace {

Expr P(const char* s) { return parse_expr(s); }
Type T(const char* s) { return parse_type(s); }

std::size_t count_nodes(const TypingDeriv& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += count_nodes(p);
  return n;
}

bool all_modes_erased(const TypingDeriv& d) {
  if (d.mode) return false;
  for (const auto& p : d.premises)
    if (!all_modes_erased(p)) return false;
  return true;
}

TypeError::Kind error_kind(Flavor f, const char* src) {
  try {
    synth(f, Ctx{}, P(src));
  } catch (const TypeError& e) {
    return e.kind();
  }
  FAIL("expected a type error for " << src);
  return TypeError::Kind::UnboundVariable;
}

}  // namespace

TEST_CASE("synthesis examples") {
  auto r = synth(Flavor::Deep, Ctx{}, P("3"));
  CHECK(r.type == Type::int_());
  CHECK(r.deriv.rule == TypingRule::IntIntro);
  CHECK(synth(Flavor::Deep, Ctx{}, P("(\\x. x) : bool -> bool")).type == T("bool -> bool"));
  CHECK(synth(Flavor::Deep, Ctx{}, P("1 / 2")).deriv.rule == TypingRule::RatOp);
  CHECK(synth(Flavor::Deep, Ctx{}, P("1 / 2")).type == Type::rat());
  CHECK(synth(Flavor::Deep, Ctx{}, P("1 + 2")).type == Type::int_());
  CHECK(synth(Flavor::Deep, Ctx{}, P("1 + 2")).deriv.rule == TypingRule::IntOp);
  CHECK(synth(Flavor::Deep, Ctx{}, P("1 + (1 / 2)")).type == Type::rat());
  CHECK(synth(Flavor::Deep, Ctx{}, P("1 < 2")).type == Type::bool_());
  CHECK(synth(Flavor::Deep, Ctx{}, P("((1, True) : int * bool).2")).type == Type::bool_());
  Ctx c = Ctx{}.extend("f", T("rat -> int"));
  CHECK(synth(Flavor::Deep, c, P("f 1")).type == Type::int_());
}

TEST_CASE("synthesis errors") {
  CHECK(error_kind(Flavor::Deep, "\\x. x") == TypeError::Kind::CannotSynthesize);
  CHECK(error_kind(Flavor::Deep, "y") == TypeError::Kind::UnboundVariable);
  CHECK(error_kind(Flavor::Deep, "1 2") == TypeError::Kind::NotAFunction);
  CHECK(error_kind(Flavor::Deep, "(1 : int).1") == TypeError::Kind::NotAProduct);
  CHECK(error_kind(Flavor::Deep, "True + 1") == TypeError::Kind::SubsumptionFailure);
  try {
    synth(Flavor::Deep, Ctx{}, P("1 + (True : bool)"));
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.path() == Path{Slot::BinOpRight});
  }
}

TEST_CASE("checking examples") {
  auto d = check(Flavor::Deep, Ctx{}, P("3"), Type::rat());
  CHECK(d.rule == TypingRule::Sub);
  REQUIRE(d.witness);
  CHECK(std::get<SubDeriv>(*d.witness).rule() == SubRule::IntRat);
  CHECK(d.premises.at(0).rule == TypingRule::IntIntro);

  CHECK_THROWS_AS(check(Flavor::Shallow, Ctx{}, P("\\x. x"), T("(int -> int) -> (int -> rat)")), TypeError);
  CHECK_NOTHROW(check(Flavor::Deep, Ctx{}, P("\\x. x"), T("(int -> int) -> (int -> rat)")));
  auto s = check(Flavor::Shallow, Ctx{}, P("\\x. x"), T("int -> rat"));
  CHECK(s.rule == TypingRule::ArrIntro);
  CHECK(s.premises.at(0).rule == TypingRule::Sub);
  CHECK(std::holds_alternative<ShallowWitness>(*s.premises.at(0).witness));
  CHECK_NOTHROW(check(Flavor::Deep, Ctx{}, P("if True then 1 else 1 / 2"), Type::rat()));
  CHECK_THROWS_AS(check(Flavor::Deep, Ctx{}, P("if 1 then 1 else 2"), Type::int_()), TypeError);
}

TEST_CASE("derivation checker") {
  auto d = synth(Flavor::Deep, Ctx{}, P("((\\f. f 1) : (int -> int) -> int) ((\\x. 2) : rat -> int)")).deriv;
  CHECK(check_typing_deriv(Flavor::Deep, d));

  REQUIRE(d.rule == TypingRule::ArrElim);
  auto swapped = d;
  std::swap(swapped.premises[0], swapped.premises[1]);
  CHECK_FALSE(check_typing_deriv(Flavor::Deep, swapped));

  auto v = check_typing_deriv(Flavor::Shallow, d);
  CHECK_FALSE(v);
  CHECK_FALSE(v.reason.empty());

  auto wrong_type = d;
  wrong_type.type = Type::rat();
  CHECK_FALSE(check_typing_deriv(Flavor::Deep, wrong_type));
}

TEST_CASE("colon erasure keeps shape and still validates") {
  testgen::Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    auto prog = testgen::random_program(rng);
    auto d = prog.mode == Mode::Synth ? synth(Flavor::Deep, Ctx{}, prog.expr).deriv
                                      : check(Flavor::Deep, Ctx{}, prog.expr, prog.type);
    auto e = erase_to_declarative(d);
    CHECK(count_nodes(e) == count_nodes(d));
    CHECK(all_modes_erased(e));
    CHECK(check_typing_deriv(Flavor::Deep, e));
  }
  auto leaf = erase_to_declarative(synth(Flavor::Deep, Ctx{}, P("3")).deriv);
  CHECK_FALSE(leaf.mode);
  CHECK(leaf.type == Type::int_());
}

TEST_CASE("generated programs check, producers agree with the checker") {
  testgen::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    auto prog = testgen::random_program(rng);
    INFO(pretty_expr(prog.expr));
    TypingDeriv d = prog.mode == Mode::Synth ? synth(Flavor::Deep, Ctx{}, prog.expr).deriv
                                             : check(Flavor::Deep, Ctx{}, prog.expr, prog.type);
    CHECK(d.type == prog.type);
    CHECK(check_typing_deriv(Flavor::Deep, d));
    CHECK(synth(Flavor::Deep, Ctx{}, Expr::anno(prog.expr, prog.type)).type == prog.type);
    // shallow success implies deep success
    try {
      auto s = check(Flavor::Shallow, Ctx{}, prog.expr, prog.type);
      CHECK(check_typing_deriv(Flavor::Shallow, s));
    } catch (const TypeError&) {
    }
  }
}

TEST_CASE("check at the synthesized type succeeds") {
  testgen::Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    auto prog = testgen::random_program(rng);
    Expr e = prog.mode == Mode::Synth ? prog.expr : Expr::anno(prog.expr, prog.type);
    for (Flavor f : {Flavor::Deep, Flavor::Shallow}) {
      try {
        auto r = synth(f, Ctx{}, e);
        CHECK_NOTHROW(check(f, Ctx{}, e, r.type));
      } catch (const TypeError&) {
        CHECK(f == Flavor::Shallow);
      }
    }
  }
}

TEST_CASE("weakening inserts the binding everywhere") {
  auto d = check(Flavor::Deep, Ctx{}, P("\\x. x"), T("int -> rat"));
  auto w = weaken(d, 0, "z", Type::bool_());
  CHECK(w.ctx.lookup("z") == Type::bool_());
  CHECK(w.premises.at(0).ctx.bindings().at(0).first == "z");
  CHECK(check_typing_deriv(Flavor::Deep, w));
}

TEST_CASE("derivation s-expressions mirror rule tags") {
  auto d = check(Flavor::Deep, Ctx{}, P("3"), Type::rat());
  CHECK(typing_deriv_to_sexpr(d).str() == "(sub (int-rat) (int-intro))");
}
