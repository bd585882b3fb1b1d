// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "etaflat/bcd.hpp"
#include "etaflat/cli.hpp"
#include "etaflat/elaborate.hpp"
#include "etaflat/parse.hpp"
#include "gen.hpp"

using namespace etaflat;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  std::size_t failures = 0;
  std::string note;
  std::string first_failure;

  void fail(const std::string& why) {
    if (failures++ == 0) first_failure = why;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(int n, const std::string& title, const std::function<Outcome()>& body, double budget_s = 0) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("uncaught exception: ") + e.what());
  }
  double secs = seconds_since(t0);
  if (budget_s > 0 && secs > budget_s) o.fail("over the time budget");
  bool ok = o.failures == 0;
  std::ostringstream line;
  line << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " (" << o.note;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << ", " << secs << " s";
  if (budget_s > 0) line << " of " << budget_s << " s";
  line << ")";
  if (!ok) line << " failures=" << o.failures << " first: " << o.first_failure;
  std::cout << line.str() << std::endl;
  return ok;
}

// Flatten one generated program and run every oracle on the result.
void round_trip(const testgen::Program& prog, bool minimize_on, Outcome& o) {
  std::optional<Type> against;
  if (prog.mode == Mode::Check) against = prog.type;
  std::string src = pretty_expr(prog.expr);
  std::optional<ElabResult> flat;
  try {
    flat = flatten(Ctx{}, prog.expr, prog.mode, against, ElabOptions{minimize_on});
  } catch (const std::exception& e) {
    o.fail(src + ": flatten threw " + e.what());
    return;
  }
  const ElabResult& r = *flat;
  if (r.type != prog.type) {
    o.fail(src + ": type changed");
    return;
  }
  try {
    if (prog.mode == Mode::Check) {
      check(Flavor::Shallow, Ctx{}, r.output, prog.type);
    } else if (synth(Flavor::Shallow, Ctx{}, r.output).type != prog.type) {
      o.fail(src + ": shallow synth gives another type");
      return;
    }
  } catch (const TypeError& e) {
    o.fail(src + ": output does not shallow-check: " + e.what());
    return;
  }
  if (!verify_trace(r.output, r.trace, prog.expr)) {
    o.fail(src + ": trace does not reduce to the original");
    return;
  }
  if (!reduce_search(r.output, prog.expr, r.trace.size())) o.fail(src + ": reduce_search found nothing");
}

bool witnesses_pure_refl(const TypingDeriv& d) {
  if (d.witness) {
    const auto* s = std::get_if<SubDeriv>(&*d.witness);
    if (s && !is_pure_refl(*s)) return false;
  }
  for (const auto& p : d.premises)
    if (!witnesses_pure_refl(p)) return false;
  return true;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion1() {
  Outcome o;
  testgen::Rng rng(20240601);
  std::size_t expanded = 0;
  for (int i = 0; i < 1000; ++i) {
    auto prog = testgen::random_program(rng);
    auto before = o.failures;
    round_trip(prog, false, o);
    if (o.failures == before) {
      std::optional<Type> against;
      if (prog.mode == Mode::Check) against = prog.type;
      if (!flatten(Ctx{}, prog.expr, prog.mode, against).trace.empty()) ++expanded;
    }
  }
  o.note = "1000 programs, " + std::to_string(expanded) + " with eta-expansion";
  return o;
}

Outcome criterion2() {
  Outcome o;
  auto types = testgen::all_types(3);
  if (types.size() != 885) o.fail("enumerated " + std::to_string(types.size()) + " types, expected 885");
  for (const auto& a : types)
    if (!deep_sub(a, a)) o.fail("reflexivity fails at " + pretty_type(a));
  std::size_t shallow_pairs = 0;
  for (const auto& a : types)
    for (const auto& b : types)
      if (shallow_sub(a, b)) {
        ++shallow_pairs;
        if (!deep_sub(a, b)) o.fail("shallow but not deep: " + pretty_type(a) + " / " + pretty_type(b));
      }
  testgen::Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    Type a = testgen::random_type(rng, 4);
    Type b = testgen::random_supertype(rng, a);
    Type c = testgen::random_supertype(rng, b);
    if (!deep_sub(a, b) || !deep_sub(b, c)) {
      o.fail("generator produced an unrelated pair");
      continue;
    }
    auto d = deep_sub(a, c);
    if (!d || check_sub_deriv(*d) != std::make_pair(a, c))
      o.fail("transitivity fails: " + pretty_type(a) + " / " + pretty_type(c));
  }
  o.note = std::to_string(types.size()) + " types, " + std::to_string(types.size() * types.size()) + " pairs (" +
           std::to_string(shallow_pairs) + " shallow), 100000 triples";
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto derivs = testgen::all_sub_derivs(3);
  Expr e = Expr::var("e");
  for (const auto& d : derivs) {
    auto x = expand_subtype(e, d, std::set<Ident>{"e"});
    if (x.trace.count(EtaRule::Arr) != count_rule(d, SubRule::Arr) ||
        x.trace.count(EtaRule::Prod) != count_rule(d, SubRule::Prod))
      o.fail(sub_deriv_to_sexpr(d).str());
  }
  o.note = std::to_string(derivs.size()) + " derivations to height 3";
  return o;
}

Outcome criterion4() {
  Outcome o;
  testgen::Rng rng(20240601);
  for (int i = 0; i < 1000; ++i) round_trip(testgen::random_program(rng), true, o);

  std::size_t refl_inputs = 0;
  testgen::Rng more(99);
  for (int i = 0; i < 5000 && refl_inputs < 200; ++i) {
    auto prog = testgen::random_program(more);
    std::optional<Type> against;
    if (prog.mode == Mode::Check) against = prog.type;
    auto r = flatten(Ctx{}, prog.expr, prog.mode, against, ElabOptions{true});
    if (!witnesses_pure_refl(r.deep_deriv)) continue;
    ++refl_inputs;
    std::string in = pretty_expr(prog.expr);
    if (pretty_expr(r.output) != in) o.fail(in + " became " + pretty_expr(r.output));
  }
  if (refl_inputs == 0) o.fail("no pure-reflexivity inputs generated");
  o.note = "1000 programs minimized, " + std::to_string(refl_inputs) + " pure-reflexivity inputs byte-identical";
  return o;
}

Outcome criterion5() {
  using namespace etaflat::bcd;
  using Type = bcd::Type;
  using SubDeriv = bcd::SubDeriv;
  using TypingDeriv = bcd::TypingDeriv;
  using TypingRule = bcd::TypingRule;
  Outcome o;
  Type a = Type::atom("a"), b = Type::atom("b"), c = Type::atom("c");
  std::vector<SubDeriv> subs{
      SubDeriv::refl(a),
      SubDeriv::top_r(a),
      SubDeriv::top_arr(),
      SubDeriv::sect_r(a),
      SubDeriv::sect_l1(a, b),
      SubDeriv::sect_l2(a, b),
      SubDeriv::dist(a, b, c),
      SubDeriv::trans(SubDeriv::sect_l1(a, b), SubDeriv::top_r(a)),
      SubDeriv::sect_cong(SubDeriv::sect_l1(a, b), SubDeriv::sect_l2(a, b)),
      SubDeriv::arr(SubDeriv::sect_l1(a, b), SubDeriv::sect_l2(c, a)),
  };
  std::size_t passed = 0;
  for (const auto& s : subs) {
    std::string name(sub_rule_name(s.rule()));
    try {
      auto [lhs, rhs] = check_sub(s);
      Basis g{{"x", lhs}};
      Term x = Term::var("x");
      TypingDeriv var{System::Extended, TypingRule::Var, Judgment{g, x, lhs}, {}, {}, {}};
      TypingDeriv d{System::Extended, TypingRule::Sub, Judgment{g, x, rhs}, {var}, s, {}};
      check_typing(d);
      auto m = lemma42(d);
      auto j = check_typing(m);
      std::size_t betas = 0;
      for (const auto& t : traces_of(m)) betas += count_beta(t);
      if (m.system != System::Modified || !well_formed_bases(m))
        o.fail(name + ": not a modified derivation");
      else if (!(j.subject == x) || !alpha_eq(j.subject, x))
        o.fail(name + ": subject changed to " + show(j.subject));
      else if (j.type != rhs)
        o.fail(name + ": type changed");
      else if (betas != 0)
        o.fail(name + ": uses beta");
      else
        ++passed;
    } catch (const std::exception& e) {
      o.fail(name + ": " + e.what());
    }
  }
  o.note = std::to_string(passed) + "/" + std::to_string(subs.size()) + " rules";
  return o;
}

Outcome criterion6() {
  using namespace etaflat::bcd;
  using Type = bcd::Type;
  using SubDeriv = bcd::SubDeriv;
  using TypingDeriv = bcd::TypingDeriv;
  using TypingRule = bcd::TypingRule;
  Outcome o;
  testgen::Rng rng(31);
  std::size_t found = 0;
  for (int i = 0; i < 200; ++i) {
    Type s = testgen::random_bcd_type(rng, 3), t = testgen::random_bcd_type(rng, 3);
    auto d = sub_search(s, t, 3);
    if (!d) continue;
    ++found;
    if (check_sub(*d) != std::make_pair(s, t)) o.fail("search result disagrees for " + show(s) + " <= " + show(t));
  }
  std::vector<std::pair<Type, Type>> spots;
  testgen::Rng srng(37);
  for (int i = 0; i < 20; ++i) {
    Type s = testgen::random_bcd_type(srng, 3), t = testgen::random_bcd_type(srng, 3),
         u = testgen::random_bcd_type(srng, 2);
    spots.emplace_back(s, Type::top());
    spots.emplace_back(Type::sect(s, t), s);
    spots.emplace_back(Type::sect(Type::arr(s, t), Type::arr(s, u)), Type::arr(s, Type::sect(t, u)));
  }
  for (const auto& [s, t] : spots) {
    auto d = sub_search(s, t, 2);
    if (!d)
      o.fail("spot pair not found: " + show(s) + " <= " + show(t));
    else if (check_sub(*d) != std::make_pair(s, t))
      o.fail("spot pair disagrees: " + show(s) + " <= " + show(t));
  }
  o.note = "200 random pairs (" + std::to_string(found) + " found), " + std::to_string(spots.size()) + " spot pairs";
  return o;
}

Outcome criterion7() {
  Outcome o;
  const std::string dir = ETAFLAT_GOLDEN_DIR;
  for (const char* name : {"g1", "g2", "g3"}) {
    std::ostringstream out, err;
    int code = run_cli({"flatten", dir + "/" + name + ".lam"}, out, err);
    if (code != kExitOk) {
      o.fail(std::string(name) + ": exit " + std::to_string(code) + " " + err.str());
      continue;
    }
    if (out.str() != slurp(dir + "/" + name + ".expected")) o.fail(std::string(name) + ": got " + out.str());
  }
  testgen::Rng rng(41);
  for (int i = 0; i < 1000; ++i) {
    Expr e = testgen::random_expr(rng, 5);
    std::string text = pretty_expr(e);
    try {
      if (!(parse_expr(text) == e)) o.fail("round trip changed " + text);
    } catch (const ParseError& err) {
      o.fail("round trip cannot parse " + text + ": " + err.what());
    }
  }
  o.note = "3 golden files, 1000 round trips";
  return o;
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, "flatten round trip on random programs", criterion1, 30);
  ok &= report(2, "subtyping properties", criterion2, 60);
  ok &= report(3, "expansion-count law", criterion3);
  ok &= report(4, "minimize soundness", criterion4, 30);
  ok &= report(5, "intersection-type rule coverage", criterion5);
  ok &= report(6, "intersection subtyping search agrees with the checker", criterion6);
  ok &= report(7, "golden files and pretty/parse round trip", criterion7);
  return ok ? 0 : 1;
}
