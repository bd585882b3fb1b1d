#pragma once

#include <optional>
#include <set>

#include "etaflat/eta.hpp"
#include "etaflat/subtyping.hpp"
#include "etaflat/syntax.hpp"
#include "etaflat/typing.hpp"

namespace etaflat {

struct ElabOptions {
  /// Leave pure-reflexivity coercions (no int :< rat leaf) unexpanded.
  bool minimize = false;
};

/// Output of flatten. `trace` reduces `output` to `source`; `deriv` is a
/// shallow derivation of `output` at `type` in the requested mode.
struct ElabResult {
  Expr source;
  Ctx ctx;
  Mode mode;
  Expr output;
  Type type;
  EtaTrace trace;
  TypingDeriv deriv;
  TypingDeriv deep_deriv;
  ElabOptions options;
};

struct Expansion {
  Expr output;
  EtaTrace trace;
};

/// η-expands e along a deep subtyping derivation of A :< B, so that an e of
/// type A becomes an output that shallow-checks against B and reduces to e.
/// Fresh binders are drawn from `fresh`, which must already avoid free_vars(e).
Expansion expand_subtype(const Expr& e, const SubDeriv& d, FreshSupply& fresh, ElabOptions opts = {});
Expansion expand_subtype(const Expr& e, const SubDeriv& d, const std::set<Ident>& avoid, ElabOptions opts = {});

/// Deep-checks e (synth, or check against `against`) and rewrites the
/// derivation into a shallow one by η-expanding at every subsumption.
/// Throws TypeError exactly as the deep checker does.
ElabResult flatten(const Ctx& ctx, const Expr& e, Mode mode, const std::optional<Type>& against,
                   ElabOptions opts = {});

/// Re-elaborates with pure-reflexivity expansions removed.
ElabResult minimize(const ElabResult& r);

struct SelfCheck {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Independent re-verification of an ElabResult: the shallow checker accepts
/// the output at the stated type, the stored derivation validates, and the
/// trace reduces the output to the source up to alpha-equivalence.
SelfCheck self_verify(const ElabResult& r);

}  // namespace etaflat
