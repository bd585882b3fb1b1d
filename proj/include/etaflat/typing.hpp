#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "etaflat/subtyping.hpp"
#include "etaflat/syntax.hpp"

namespace etaflat {

enum class Mode { Synth, Check };

/// Deep uses :< in subsumption; Shallow uses :<:.
enum class Flavor { Deep, Shallow };

enum class TypingRule {
  Var,
  ArrIntro,
  ArrElim,
  Sub,
  Anno,
  ProdIntro,
  ProdElim,
  IntIntro,
  IntOp,
  RatOp,
  BoolIntro,
  BoolElim,
};

std::string_view rule_name(TypingRule r);
std::string_view flavor_name(Flavor f);

/// The premise of a shallow subsumption: the pair (A, B) with A :<: B.
struct ShallowWitness {
  Type lhs;
  Type rhs;
};

using SubWitness = std::variant<SubDeriv, ShallowWitness>;

/// A rule-tagged typing derivation node. `mode` is empty in the
/// colon-erased (declarative) form.
struct TypingDeriv {
  TypingRule rule;
  Ctx ctx;
  Expr expr;
  std::optional<Mode> mode;
  Type type;
  std::vector<TypingDeriv> premises;
  std::optional<SubWitness> witness;  // Sub only

  std::size_t size() const;
};

class TypeError : public std::runtime_error {
 public:
  enum class Kind { UnboundVariable, CannotSynthesize, NotAFunction, NotAProduct, SubsumptionFailure };

  TypeError(Kind kind, Path path, const std::string& message);

  Kind kind() const { return kind_; }
  const Path& path() const { return path_; }

 private:
  Kind kind_;
  Path path_;
};

struct Synthesized {
  Type type;
  TypingDeriv deriv;
};

/// ctx |- e => A. Throws TypeError.
Synthesized synth(Flavor flavor, const Ctx& ctx, const Expr& e);
/// ctx |- e <= B. Throws TypeError.
TypingDeriv check(Flavor flavor, const Ctx& ctx, const Expr& e, const Type& against);

/// Drops every mode, yielding a derivation in the colon form.
TypingDeriv erase_to_declarative(const TypingDeriv& d);

struct DerivVerdict {
  bool ok = true;
  std::string at;  // premise indices from the root, e.g. "0/1"; "." for the root
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Validates every node against the bidirectional rules (or, for a
/// colon-erased derivation, the declarative rules) of the given flavor.
DerivVerdict check_typing_deriv(Flavor flavor, const TypingDeriv& d);

/// Inserts x : t at position `at` of every context in the tree.
TypingDeriv weaken(const TypingDeriv& d, std::size_t at, const Ident& x, const Type& t);

/// `(sub (int-rat) (int-intro))`; shallow witnesses print as `(shallow A B)`.
SExpr typing_deriv_to_sexpr(const TypingDeriv& d);

}  // namespace etaflat
