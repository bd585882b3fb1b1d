#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "etaflat/sexpr.hpp"
#include "etaflat/syntax.hpp"

/// Intersection types with top, their ten-rule subtyping preorder, extended
/// type assignment (with subsumption) and the modified system (with a
/// βη-reduction rule instead), plus the translation between the two.
namespace etaflat::bcd {

// ----------------------------------------------------------------- types

enum class TypeKind { Atom, Top, Arr, Sect };

class Type {
 public:
  static Type atom(Ident name);
  static Type top();
  static Type arr(Type from, Type to);
  static Type sect(Type left, Type right);

  TypeKind kind() const;
  bool is(TypeKind k) const { return kind() == k; }
  const Ident& name() const;
  const Type& left() const;   // Arr domain, Sect left
  const Type& right() const;  // Arr codomain, Sect right
  int depth() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
  friend bool operator<(const Type& a, const Type& b);

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Type::Node {
  TypeKind kind;
  Ident name;
  std::optional<Type> l;
  std::optional<Type> r;
};

inline TypeKind Type::kind() const { return node_->kind; }
inline const Ident& Type::name() const { return node_->name; }

std::string show(const Type& t);

// ----------------------------------------------------------------- terms

enum class TermKind { Var, Lam, App };

class Term {
 public:
  static Term var(Ident x);
  static Term lam(Ident x, Term body);
  static Term app(Term fn, Term arg);

  TermKind kind() const { return node_->kind; }
  bool is(TermKind k) const { return node_->kind == k; }
  const Ident& name() const { return node_->name; }
  const Term& body() const { return node_->kids.at(0); }
  const Term& fn() const { return node_->kids.at(0); }
  const Term& arg() const { return node_->kids.at(1); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    TermKind kind;
    Ident name;
    std::vector<Term> kids;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::string show(const Term& m);
std::set<Ident> free_vars(const Term& m);
std::set<Ident> all_idents(const Term& m);
bool alpha_eq(const Term& a, const Term& b);
/// Capture-avoiding m[n/x].
Term subst(const Term& m, const Ident& x, const Term& n);

// ------------------------------------------------------ βη traces

enum class ReductionRule { Eta, Beta };

/// Paths use the lam-body / app-fn / app-arg selectors.
struct ReductionStep {
  Path at;
  ReductionRule rule;
};

using BetaEtaTrace = std::vector<ReductionStep>;

Term reduce_step(const Term& m, const ReductionStep& s);  // throws BcdError
Term apply_trace(const Term& m, const BetaEtaTrace& t);
std::size_t count_beta(const BetaEtaTrace& t);

// ------------------------------------------------------ subtyping

enum class SubRule { Refl, TopR, TopArr, SectR, SectL1, SectL2, Dist, Trans, SectCong, Arr };

inline constexpr SubRule kAllSubRules[] = {SubRule::Refl,   SubRule::TopR, SubRule::TopArr, SubRule::SectR,
                                           SubRule::SectL1, SubRule::SectL2, SubRule::Dist, SubRule::Trans,
                                           SubRule::SectCong, SubRule::Arr};

std::string_view sub_rule_name(SubRule r);

/// A derivation of sigma <= tau. Each node records its claimed conclusion.
class SubDeriv {
 public:
  static SubDeriv refl(Type t);
  static SubDeriv top_r(Type t);
  static SubDeriv top_arr();
  static SubDeriv sect_r(Type t);
  static SubDeriv sect_l1(Type s, Type t);
  static SubDeriv sect_l2(Type s, Type t);
  static SubDeriv dist(Type s, Type t1, Type t2);
  static SubDeriv trans(SubDeriv first, SubDeriv second);
  static SubDeriv sect_cong(SubDeriv left, SubDeriv right);
  /// First premise concludes tau1 <= sigma1 (contravariant).
  static SubDeriv arr(SubDeriv dom, SubDeriv cod);
  static SubDeriv claim(SubRule rule, Type lhs, Type rhs, std::vector<SubDeriv> premises);

  SubRule rule() const { return node_->rule; }
  const Type& lhs() const { return node_->lhs; }
  const Type& rhs() const { return node_->rhs; }
  const std::vector<SubDeriv>& premises() const { return node_->premises; }

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

class BcdError : public std::runtime_error {
 public:
  enum class Kind { SchemaMismatch, TraceReplay, LargeBasis, Precondition, Syntax };

  BcdError(Kind kind, std::string where, const std::string& message);

  Kind kind() const { return kind_; }
  const std::string& where() const { return where_; }

 private:
  Kind kind_;
  std::string where_;
};

std::pair<Type, Type> check_sub(const SubDeriv& d);
std::size_t height(const SubDeriv& d);

/// Iterative deepening up to max_depth (derivation height). A result checks
/// with exactly (sigma, tau); nullopt is not a refutation.
std::optional<SubDeriv> sub_search(const Type& sigma, const Type& tau, int max_depth);

// ------------------------------------------------------ type assignment

/// Extended: with subsumption. Modified: subsumption replaced by βη.
enum class System { Extended, Modified };

enum class TypingRule { Var, ArrIntro, ArrElim, SectIntro, SectElim1, SectElim2, TopIntro, Sub, BetaEta };

std::string_view typing_rule_name(TypingRule r);

/// Basis entries bind variables only.
using Basis = std::vector<std::pair<Ident, Type>>;

std::optional<Type> lookup(const Basis& b, const Ident& x);

struct Judgment {
  Basis basis;
  Term subject;
  Type type;
};

struct TypingDeriv {
  System system;
  TypingRule rule;
  Judgment concl;
  std::vector<TypingDeriv> premises;
  std::optional<SubDeriv> sub;        // Sub only
  std::optional<BetaEtaTrace> trace;  // BetaEta only: replays premise subject to this subject

  std::size_t size() const;
};

/// Validates every node and returns the root judgment. Throws BcdError.
Judgment check_typing(const TypingDeriv& d);

/// sigma <= tau and D : basis |-* M : sigma  give  basis |-* M : tau.
TypingDeriv core42(const SubDeriv& sub, const TypingDeriv& d);
/// Extended derivation to a modified derivation of the same judgment.
TypingDeriv lemma42(const TypingDeriv& d);
/// Threads x : t through every basis, right after the root basis. Inner
/// binders named x are renamed first. Throws BcdError if x is in the root basis.
TypingDeriv weaken(const TypingDeriv& d, const Ident& x, const Type& t);

/// Every βη trace in the tree.
std::vector<BetaEtaTrace> traces_of(const TypingDeriv& d);
/// Every basis in the tree binds variables only and the tree never mixes systems.
bool well_formed_bases(const TypingDeriv& d);

// ------------------------------------------------------ s-expression I/O

SExpr to_sexpr(const Type& t);
SExpr to_sexpr(const Term& m);
SExpr to_sexpr(const SubDeriv& d);
SExpr to_sexpr(const TypingDeriv& d);

Type type_from_sexpr(const SExpr& s);
Term term_from_sexpr(const SExpr& s);
SubDeriv sub_from_sexpr(const SExpr& s);
TypingDeriv typing_from_sexpr(const SExpr& s);

}  // namespace etaflat::bcd
