#include "etaflat/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "etaflat/bcd.hpp"
#include "etaflat/elaborate.hpp"
#include "etaflat/parse.hpp"

namespace etaflat {

namespace {

struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitUsage, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{kExitUsage, "cannot write " + path};
}

Flavor flavor_from(const std::string& s) { return s == "shallow" ? Flavor::Shallow : Flavor::Deep; }

Mode mode_from(const std::string& s, const std::string& type) {
  Mode m = s == "check" ? Mode::Check : Mode::Synth;
  if ((m == Mode::Check) != !type.empty()) throw Failure{kExitUsage, "--type is required exactly when --mode check"};
  return m;
}

std::string show_basis(const bcd::Basis& b) {
  std::string out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) out += ", ";
    out += b[i].first + " : " + bcd::show(b[i].second);
  }
  return out;
}

std::string show_judgment(bcd::System s, const bcd::Judgment& j) {
  std::string out = show_basis(j.basis);
  if (!out.empty()) out += ' ';
  out += s == bcd::System::Modified ? "|-* " : "|- ";
  return out + bcd::show(j.subject) + " : " + bcd::show(j.type);
}

struct Options {
  bool quiet = false;

  std::string file, flat_file, system = "deep", mode = "synth", type, lhs, rhs;
  bool emit_deriv = false;

  bool minimize = false, no_self_verify = false;
  std::string emit_trace, output;

  std::string trace_file;
  std::size_t search_fuel = 0;

  std::string bcd_file, sigma, tau;
  int depth = 4;
};

int cmd_check(const Options& o, std::ostream& out) {
  Expr e = parse_expr(read_file(o.file));
  Flavor f = flavor_from(o.system);
  Mode m = mode_from(o.mode, o.type);
  TypingDeriv d = [&] {
    if (m == Mode::Synth) {
      auto r = synth(f, Ctx{}, e);
      out << pretty_type(r.type) << '\n';
      return r.deriv;
    }
    auto r = check(f, Ctx{}, e, parse_type(o.type));
    out << "ok\n";
    return r;
  }();
  if (o.emit_deriv) out << typing_deriv_to_sexpr(d).str() << '\n';
  return kExitOk;
}

int cmd_sub(const Options& o, std::ostream& out) {
  Type a = parse_type(o.lhs), b = parse_type(o.rhs);
  if (flavor_from(o.system) == Flavor::Shallow) {
    bool yes = shallow_sub(a, b);
    out << (yes ? "yes" : "no") << '\n';
    return yes ? kExitOk : kExitTypeError;
  }
  auto d = deep_sub(a, b);
  out << (d ? "yes" : "no") << '\n';
  if (d && o.emit_deriv) out << sub_deriv_to_sexpr(*d).str() << '\n';
  return d ? kExitOk : kExitTypeError;
}

int cmd_flatten(const Options& o, std::ostream& out) {
  Expr e = parse_expr(read_file(o.file));
  Mode m = mode_from(o.mode, o.type);
  std::optional<Type> against;
  if (m == Mode::Check) against = parse_type(o.type);
  ElabResult r = flatten(Ctx{}, e, m, against, ElabOptions{o.minimize});
  if (!o.no_self_verify) {
    auto v = self_verify(r);
    if (!v) throw Failure{kExitVerifyFailure, "self-verification failed: " + v.reason};
  }
  std::string program = pretty_expr(r.output) + "\n";
  if (o.output.empty()) {
    out << program;
  } else {
    write_file(o.output, program);
  }
  if (!o.emit_trace.empty()) write_file(o.emit_trace, trace_to_text(r.trace));
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  Expr orig = parse_expr(read_file(o.file), ParseOptions{true});
  Expr flat = parse_expr(read_file(o.flat_file), ParseOptions{true});
  try {
    if (o.type.empty()) {
      Type t = synth(Flavor::Shallow, Ctx{}, flat).type;
      out << "shallow type: " << pretty_type(t) << '\n';
    } else {
      check(Flavor::Shallow, Ctx{}, flat, parse_type(o.type));
      out << "shallow check: ok\n";
    }
  } catch (const TypeError& e) {
    throw Failure{kExitVerifyFailure, std::string("flattened program does not shallow-check: ") + e.what()};
  }
  if (!o.trace_file.empty()) {
    EtaTrace t;
    try {
      t = trace_from_text(read_file(o.trace_file));
    } catch (const std::invalid_argument& e) {
      throw Failure{kExitParseError, e.what()};
    }
    try {
      Expr reduct = apply_trace(flat, t);
      if (!alpha_eq(reduct, orig))
        throw Failure{kExitVerifyFailure, "trace reduces to " + pretty_expr(reduct) + ", not the original"};
    } catch (const EtaError& e) {
      throw Failure{kExitVerifyFailure, std::string("trace does not replay: ") + e.what()};
    }
    out << "trace: ok (" << t.size() << " steps)\n";
  } else {
    std::size_t fuel = o.search_fuel ? o.search_fuel : node_count(flat);
    auto t = reduce_search(flat, orig, fuel);
    if (!t) throw Failure{kExitVerifyFailure, "no eta reduction to the original within fuel " + std::to_string(fuel)};
    out << "search: ok (" << t->size() << " steps)\n";
  }
  return kExitOk;
}

SExpr read_sexpr_file(const std::string& path) { return parse_sexpr(read_file(path)); }

int cmd_bcd(const std::string& sub, const Options& o, std::ostream& out) {
  if (sub == "check-sub") {
    auto [l, r] = bcd::check_sub(bcd::sub_from_sexpr(read_sexpr_file(o.bcd_file)));
    out << bcd::show(l) << " <= " << bcd::show(r) << '\n';
    return kExitOk;
  }
  if (sub == "check-typing") {
    auto d = bcd::typing_from_sexpr(read_sexpr_file(o.bcd_file));
    out << show_judgment(d.system, bcd::check_typing(d)) << '\n';
    return kExitOk;
  }
  if (sub == "flatten") {
    auto d = bcd::typing_from_sexpr(read_sexpr_file(o.bcd_file));
    auto m = bcd::lemma42(d);
    bcd::check_typing(m);
    out << bcd::to_sexpr(m).str() << '\n';
    return kExitOk;
  }
  bcd::Type s = bcd::type_from_sexpr(parse_sexpr(o.sigma)), t = bcd::type_from_sexpr(parse_sexpr(o.tau));
  auto d = bcd::sub_search(s, t, o.depth);
  if (!d) {
    out << "none within depth " << o.depth << '\n';
    return kExitTypeError;
  }
  bcd::check_sub(*d);
  out << bcd::to_sexpr(*d).str() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flattening deep subtyping into shallow subtyping by eta-expansion", "etaflat"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("-q,--quiet", o.quiet, "Exit codes only");

  auto* check = app.add_subcommand("check", "Type-check a program");
  check->add_option("file", o.file)->required();
  check->add_option("--system", o.system)->check(CLI::IsMember({"deep", "shallow"}));
  check->add_option("--mode", o.mode)->check(CLI::IsMember({"synth", "check"}));
  check->add_option("--type", o.type);
  check->add_flag("--emit-deriv", o.emit_deriv);

  auto* sub = app.add_subcommand("sub", "Decide A :< B");
  sub->add_option("--system", o.system)->check(CLI::IsMember({"deep", "shallow"}));
  sub->add_option("lhs", o.lhs)->required();
  sub->add_option("rhs", o.rhs)->required();
  sub->add_flag("--emit-deriv", o.emit_deriv);

  auto* fl = app.add_subcommand("flatten", "Eta-expand a deep-typed program into a shallow-typed one");
  fl->add_option("file", o.file)->required();
  fl->add_option("--mode", o.mode)->check(CLI::IsMember({"synth", "check"}));
  fl->add_option("--type", o.type);
  fl->add_flag("--minimize-coercions", o.minimize);
  fl->add_option("--emit-trace", o.emit_trace);
  fl->add_option("-o,--output", o.output);
  fl->add_flag("--no-self-verify", o.no_self_verify);

  auto* ver = app.add_subcommand("verify", "Check a flattened program against its original");
  ver->add_option("original", o.file)->required();
  ver->add_option("flattened", o.flat_file)->required();
  auto* trace_opt = ver->add_option("--trace", o.trace_file);
  ver->add_option("--search-fuel", o.search_fuel)->excludes(trace_opt);
  ver->add_option("--type", o.type);

  auto* bcd = app.add_subcommand("bcd", "Intersection-type derivations");
  bcd->require_subcommand(1);
  auto* bcs = bcd->add_subcommand("check-sub", "Validate a subtyping derivation");
  bcs->add_option("file", o.bcd_file)->required();
  auto* bct = bcd->add_subcommand("check-typing", "Validate a typing derivation");
  bct->add_option("file", o.bcd_file)->required();
  auto* bcf = bcd->add_subcommand("flatten", "Eliminate subsumption from an extended derivation");
  bcf->add_option("file", o.bcd_file)->required();
  auto* bss = bcd->add_subcommand("sub-search", "Search for a subtyping derivation");
  bss->add_option("sigma", o.sigma)->required();
  bss->add_option("tau", o.tau)->required();
  bss->add_option("--depth", o.depth)->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "etaflat: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ostringstream sink;
  std::ostream& report = o.quiet ? sink : out;
  std::ostream& diag = o.quiet ? sink : err;
  try {
    if (*check) return cmd_check(o, report);
    if (*sub) return cmd_sub(o, report);
    if (*fl) return cmd_flatten(o, report);
    if (*ver) return cmd_verify(o, report);
    for (auto* sc : {bcs, bct, bcf, bss})
      if (*sc) return cmd_bcd(sc->get_name(), o, report);
    return kExitUsage;
  } catch (const Failure& f) {
    diag << "etaflat: " << f.message << '\n';
    return f.code;
  } catch (const ParseError& e) {
    diag << "etaflat: parse error: " << e.what() << '\n';
    return kExitParseError;
  } catch (const SExprError& e) {
    diag << "etaflat: parse error: " << e.what() << '\n';
    return kExitParseError;
  } catch (const TypeError& e) {
    diag << "etaflat: type error: " << e.what() << '\n';
    return kExitTypeError;
  } catch (const bcd::BcdError& e) {
    diag << "etaflat: " << e.what() << '\n';
    return e.kind() == bcd::BcdError::Kind::Syntax ? kExitParseError : kExitVerifyFailure;
  }
}

}  // namespace etaflat
