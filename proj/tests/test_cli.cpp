#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "etaflat/cli.hpp"

using namespace etaflat;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("etaflat-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    auto p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("check") {
  TempDir d;
  auto f = d.write("a.lam", "1 / 2\n");
  auto r = run({"check", f});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "rat\n");

  auto lam = d.write("b.lam", "\\x. x\n");
  CHECK(run({"check", lam, "--mode", "check", "--type", "int -> rat"}).out == "ok\n");
  CHECK(run({"check", lam, "--mode", "check", "--type", "int -> rat", "--system", "shallow"}).code == kExitOk);
  auto nested = run({"check", lam, "--mode", "check", "--type", "(int -> int) -> (int -> rat)", "--system", "shallow"});
  CHECK(nested.code == kExitTypeError);
  CHECK(nested.err.rfind("etaflat: type error:", 0) == 0);

  auto bad = d.write("c.lam", "True + 1\n");
  CHECK(run({"check", bad}).code == kExitTypeError);
  CHECK(run({"check", d.write("d.lam", "1 +\n")}).code == kExitParseError);
  CHECK(run({"check", d.path("missing.lam")}).code == kExitUsage);

  auto emitted = run({"check", d.write("e.lam", "3 : rat"), "--emit-deriv"});
  CHECK(emitted.out == "rat\n(anno (sub (int-rat) (int-intro)))\n");
}

TEST_CASE("sub") {
  CHECK(run({"sub", "int -> int", "int -> rat"}).out == "yes\n");
  auto no = run({"sub", "rat", "int"});
  CHECK(no.code == kExitTypeError);
  CHECK(no.out == "no\n");
  CHECK(run({"sub", "--system", "shallow", "int -> int", "int -> rat"}).out == "no\n");
  CHECK(run({"sub", "rat -> bool", "int -> bool", "--emit-deriv"}).out == "yes\n(arr (int-rat) (refl-bool))\n");
  CHECK(run({"sub", "int ->", "int"}).code == kExitParseError);
}

TEST_CASE("flatten and verify") {
  TempDir d;
  auto src = d.write("g.lam", "((\\x. x) : int -> int) : int -> rat\n");
  auto out = d.path("g.flat");
  auto tr = d.path("g.trace");
  auto r = run({"flatten", src, "-o", out, "--emit-trace", tr});
  CHECK(r.code == kExitOk);
  CHECK(slurp(out) == "(\\_eta_0. ((\\x. x) : int -> int) _eta_0) : int -> rat\n");
  CHECK(slurp(tr) == "anno-subject arr\n");

  auto v = run({"verify", src, out, "--trace", tr});
  CHECK(v.code == kExitOk);
  CHECK(v.out == "shallow type: int -> rat\ntrace: ok (1 steps)\n");
  CHECK(run({"verify", src, out}).out == "shallow type: int -> rat\nsearch: ok (1 steps)\n");

  auto unrelated = d.write("u.lam", "(\\y. y) : int -> rat\n");
  CHECK(run({"verify", unrelated, out}).code == kExitVerifyFailure);
  CHECK(run({"verify", src, src}).code == kExitVerifyFailure);
  CHECK(run({"verify", src, out, "--trace", d.write("bad.trace", ". beta\n")}).code == kExitParseError);
  CHECK(run({"verify", src, out, "--trace", tr, "--search-fuel", "3"}).code == kExitUsage);

  auto check_mode = d.write("f.lam", "\\x. x\n");
  auto c = run({"flatten", check_mode, "--mode", "check", "--type", "(int -> int) -> (int -> rat)"});
  CHECK(c.code == kExitOk);
  CHECK(c.out == "\\x. \\_eta_0. x _eta_0\n");

  auto quiet = run({"-q", "check", d.write("t.lam", "True + 1")});
  CHECK(quiet.code == kExitTypeError);
  CHECK(quiet.out.empty());
  CHECK(quiet.err.empty());
}

TEST_CASE("bcd commands") {
  TempDir d;
  auto sub = d.write("s.sexp", "(dist (atom a) (atom b) (atom c))\n");
  auto r = run({"bcd", "check-sub", sub});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "(a -> b) & (a -> c) <= a -> b & c\n");

  auto typing = d.write("t.sexp",
                        "(extended (sub (basis (x (sect (atom a) (atom b)))) (var x) (atom a)\n"
                        "  (sect-l1 (atom a) (atom b))\n"
                        "  (var (basis (x (sect (atom a) (atom b)))) (var x) (sect (atom a) (atom b)))))\n");
  auto t = run({"bcd", "check-typing", typing});
  CHECK(t.code == kExitOk);
  CHECK(t.out == "x : a & b |- x : a\n");
  auto fl = run({"bcd", "flatten", typing});
  CHECK(fl.code == kExitOk);
  auto flat = d.write("flat.sexp", fl.out);
  CHECK(run({"bcd", "check-typing", flat}).out == "x : a & b |-* x : a\n");

  auto found = run({"bcd", "sub-search", "(sect (atom a) (atom b))", "(sect (atom b) (atom a))"});
  CHECK(found.code == kExitOk);
  CHECK(run({"bcd", "sub-search", "(atom a)", "(atom b)", "--depth", "3"}).out == "none within depth 3\n");

  auto large = d.write("l.sexp", "(modified (top-intro (basis ((app (var f) (var y)) top)) (var z) top))\n");
  CHECK(run({"bcd", "check-typing", large}).code == kExitVerifyFailure);
  CHECK(run({"bcd", "check-sub", d.write("x.sexp", "(dist (atom a)")}).code == kExitParseError);
  CHECK(run({"bcd"}).code == kExitUsage);
}

TEST_CASE("usage") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"check"}).code == kExitUsage);
  auto h = run({"--help"});
  CHECK(h.code == kExitOk);
  CHECK(h.out.find("flatten") != std::string::npos);
}
