#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "etaflat/sexpr.hpp"
#include "etaflat/syntax.hpp"

namespace etaflat {

enum class SubRule { ReflInt, ReflBool, ReflRat, IntRat, Arr, Prod };

/// A deep-subtyping derivation. Every node records the judgment it claims
/// to conclude; check_sub_deriv validates those claims.
///
/// For Arr concluding (A1 -> A2) :< (B1 -> B2), child 0 concludes B1 :< A1
/// and child 1 concludes A2 :< B2. Prod is covariant in both children.
class SubDeriv {
 public:
  static SubDeriv refl_int();
  static SubDeriv refl_bool();
  static SubDeriv refl_rat();
  static SubDeriv int_rat();
  /// Conclusion computed from the premises.
  static SubDeriv arr(SubDeriv dom, SubDeriv cod);
  static SubDeriv prod(SubDeriv left, SubDeriv right);
  /// Arbitrary node with an explicit (possibly wrong) claimed conclusion.
  static SubDeriv claim(SubRule rule, Type lhs, Type rhs, std::vector<SubDeriv> premises);

  SubRule rule() const { return node_->rule; }
  const Type& lhs() const { return node_->lhs; }
  const Type& rhs() const { return node_->rhs; }
  const std::vector<SubDeriv>& premises() const { return node_->premises; }
  bool is_leaf() const { return node_->premises.empty(); }

  friend bool operator==(const SubDeriv& a, const SubDeriv& b);
  friend bool operator!=(const SubDeriv& a, const SubDeriv& b) { return !(a == b); }

 private:
  struct Node {
    SubRule rule;
    Type lhs;
    Type rhs;
    std::vector<SubDeriv> premises;
  };
  explicit SubDeriv(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class SubDerivError : public std::runtime_error {
 public:
  SubDerivError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A :< B (deep). Syntax-directed: one rule per pair of head constructors.
std::optional<SubDeriv> deep_sub(const Type& a, const Type& b);
/// A :<: B (shallow): A == B or (A, B) == (int, rat).
bool shallow_sub(const Type& a, const Type& b);
/// Validates every node and returns the root conclusion.
std::pair<Type, Type> check_sub_deriv(const SubDeriv& d);

/// True when the derivation contains no IntRat leaf, so A == B.
bool is_pure_refl(const SubDeriv& d);
std::size_t count_rule(const SubDeriv& d, SubRule r);
std::size_t height(const SubDeriv& d);

SExpr type_to_sexpr(const Type& t);
Type type_from_sexpr(const SExpr& s);

/// `(arr (int-rat) (refl-bool))`; conclusions are not written.
SExpr sub_deriv_to_sexpr(const SubDeriv& d);
/// Rebuilds a derivation from the rule skeleton, recomputing conclusions.
SubDeriv sub_deriv_from_sexpr(const SExpr& s);

}  // namespace etaflat
