#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "etaflat/syntax.hpp"

namespace etaflat {

/// The two local reductions: `\x. f x -> f` (x not free in f) and
/// `(g.1, g.2) -> g`.
enum class EtaRule { Arr, Prod };

struct EtaStep {
  Path at;
  EtaRule rule;

  friend bool operator==(const EtaStep& a, const EtaStep& b) { return a.at == b.at && a.rule == b.rule; }
};

/// Steps applied left to right. The empty trace is the reflexive case.
struct EtaTrace {
  std::vector<EtaStep> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  std::size_t count(EtaRule r) const;
  /// Appends `other` with every path prefixed by `prefix`.
  void append(const EtaTrace& other, const Path& prefix = {});

  friend bool operator==(const EtaTrace& a, const EtaTrace& b) { return a.steps == b.steps; }
};

class EtaError : public std::runtime_error {
 public:
  enum class Kind { PathInvalid, ShapeMismatch, CaptureViolation };

  EtaError(Kind kind, const std::string& message, std::optional<std::size_t> step = std::nullopt);

  Kind kind() const { return kind_; }
  /// Index of the failing step, when raised by apply_trace.
  std::optional<std::size_t> step() const { return step_; }

 private:
  Kind kind_;
  std::optional<std::size_t> step_;
};

Expr step_at(const Expr& e, const EtaStep& s);
Expr apply_trace(const Expr& e, const EtaTrace& t);
/// apply_trace(source, t) succeeds and is alpha-equal to target.
bool verify_trace(const Expr& source, const EtaTrace& t, const Expr& target);

/// Every position in e where one of the two local rules applies.
std::vector<EtaStep> redexes(const Expr& e);

/// Exhaustive search for a trace of at most `fuel` steps from source to a
/// term alpha-equal to target. Terminates because every step shrinks the term.
std::optional<EtaTrace> reduce_search(const Expr& source, const Expr& target, std::size_t fuel);

std::string_view eta_rule_name(EtaRule r);
/// One `<path> <rule>` line per step.
std::string trace_to_text(const EtaTrace& t);
/// Inverse of trace_to_text; blank lines and `#` comments are skipped.
EtaTrace trace_from_text(std::string_view text);  // throws std::invalid_argument

}  // namespace etaflat
