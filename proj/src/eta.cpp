#include "etaflat/eta.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "etaflat/parse.hpp"

namespace etaflat {

std::size_t EtaTrace::count(EtaRule r) const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [r](const EtaStep& s) { return s.rule == r; }));
}

void EtaTrace::append(const EtaTrace& other, const Path& prefix) {
  for (const auto& s : other.steps) steps.push_back({prefix + s.at, s.rule});
}

EtaError::EtaError(Kind kind, const std::string& message, std::optional<std::size_t> step)
    : std::runtime_error(step ? "step " + std::to_string(*step) + ": " + message : message), kind_(kind), step_(step) {}

namespace {

// Returns the reduct of a root redex, or the reason it is not one.
std::optional<Expr> contract(const Expr& e, EtaRule rule, std::string* why, EtaError::Kind* kind) {
  if (rule == EtaRule::Arr) {
    if (!e.is(ExprKind::Lam) || !e.body().is(ExprKind::App) || !e.body().arg().is(ExprKind::Var) ||
        e.body().arg().name() != e.name()) {
      *why = "not of the form \\x. f x: " + pretty_expr(e);
      *kind = EtaError::Kind::ShapeMismatch;
      return std::nullopt;
    }
    const Expr& f = e.body().fn();
    if (occurs_free(e.name(), f)) {
      *why = "binder " + e.name() + " occurs free in " + pretty_expr(f);
      *kind = EtaError::Kind::CaptureViolation;
      return std::nullopt;
    }
    return f;
  }
  if (!e.is(ExprKind::Pair) || !e.first().is(ExprKind::Proj) || !e.second().is(ExprKind::Proj) ||
      e.first().index() != 1 || e.second().index() != 2) {
    *why = "not of the form (g.1, g.2): " + pretty_expr(e);
    *kind = EtaError::Kind::ShapeMismatch;
    return std::nullopt;
  }
  if (!alpha_eq(e.first().subject(), e.second().subject())) {
    *why = "projection subjects differ in " + pretty_expr(e);
    *kind = EtaError::Kind::ShapeMismatch;
    return std::nullopt;
  }
  return e.first().subject();
}

void collect_redexes(const Expr& e, Path& here, std::vector<EtaStep>& out) {
  std::string why;
  EtaError::Kind kind;
  if (e.is(ExprKind::Lam) && contract(e, EtaRule::Arr, &why, &kind)) out.push_back({here, EtaRule::Arr});
  if (e.is(ExprKind::Pair) && contract(e, EtaRule::Prod, &why, &kind)) out.push_back({here, EtaRule::Prod});
  for (std::size_t i = 0; i < e.children().size(); ++i) {
    here.push_back(slot_of(e.kind(), i));
    collect_redexes(e.child(i), here, out);
    here.pop_back();
  }
}

// De Bruijn rendering; equal keys iff alpha-equal.
void canonical(const Expr& e, std::vector<Ident>& bound, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Var: {
      auto it = std::find(bound.rbegin(), bound.rend(), e.name());
      if (it == bound.rend()) {
        out += "$" + e.name();
      } else {
        out += "#" + std::to_string(it - bound.rbegin());
      }
      out += ' ';
      return;
    }
    case ExprKind::Lam:
      out += "L ";
      bound.push_back(e.name());
      canonical(e.body(), bound, out);
      bound.pop_back();
      return;
    case ExprKind::Anno:
      out += "A[" + pretty_type(e.annotation()) + "] ";
      break;
    case ExprKind::IntLit:
      out += "I" + std::to_string(e.int_value()) + ' ';
      return;
    case ExprKind::BoolLit:
      out += e.bool_value() ? "T " : "F ";
      return;
    case ExprKind::BinOp:
      out += "O" + std::string(binop_symbol(e.op())) + ' ';
      break;
    case ExprKind::Proj:
      out += "P" + std::to_string(e.index()) + ' ';
      break;
    default:
      out += std::to_string(static_cast<int>(e.kind())) + ' ';
  }
  for (const auto& k : e.children()) canonical(k, bound, out);
}

std::string key_of(const Expr& e) {
  std::string out;
  std::vector<Ident> bound;
  canonical(e, bound, out);
  return out;
}

class Search {
 public:
  Search(const Expr& target) : target_(target), target_size_(node_count(target)) {}

  bool dfs(const Expr& term, std::size_t fuel, std::vector<EtaStep>& trail) {
    if (alpha_eq(term, target_)) return true;
    if (fuel == 0 || node_count(term) <= target_size_) return false;
    auto key = key_of(term);
    auto seen = dead_.find(key);
    if (seen != dead_.end() && seen->second >= fuel) return false;
    // outermost first: collapsing a duplicated copy early spares exploring each copy's insides
    auto steps = redexes(term);
    std::stable_sort(steps.begin(), steps.end(),
                     [](const EtaStep& a, const EtaStep& b) { return a.at.size() < b.at.size(); });
    for (const auto& step : steps) {
      trail.push_back(step);
      if (dfs(step_at(term, step), fuel - 1, trail)) return true;
      trail.pop_back();
    }
    dead_[key] = std::max(dead_[key], fuel);
    return false;
  }

 private:
  const Expr& target_;
  std::size_t target_size_;
  std::unordered_map<std::string, std::size_t> dead_;
};

}  // namespace

Expr step_at(const Expr& e, const EtaStep& s) {
  const Expr* node;
  try {
    node = &subterm_at(e, s.at);
  } catch (const PathError& err) {
    throw EtaError(EtaError::Kind::PathInvalid, err.what());
  }
  std::string why;
  EtaError::Kind kind = EtaError::Kind::ShapeMismatch;
  auto reduct = contract(*node, s.rule, &why, &kind);
  if (!reduct) throw EtaError(kind, "at " + path_to_string(s.at) + ": " + why);
  return replace_at(e, s.at, *reduct);
}

Expr apply_trace(const Expr& e, const EtaTrace& t) {
  Expr cur = e;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    try {
      cur = step_at(cur, t.steps[i]);
    } catch (const EtaError& err) {
      throw EtaError(err.kind(), err.what(), i);
    }
  }
  return cur;
}

bool verify_trace(const Expr& source, const EtaTrace& t, const Expr& target) {
  try {
    return alpha_eq(apply_trace(source, t), target);
  } catch (const EtaError&) {
    return false;
  }
}

std::vector<EtaStep> redexes(const Expr& e) {
  std::vector<EtaStep> out;
  Path here;
  collect_redexes(e, here, out);
  return out;
}

std::optional<EtaTrace> reduce_search(const Expr& source, const Expr& target, std::size_t fuel) {
  Search search(target);
  std::vector<EtaStep> trail;
  if (!search.dfs(source, fuel, trail)) return std::nullopt;
  return EtaTrace{std::move(trail)};
}

std::string_view eta_rule_name(EtaRule r) { return r == EtaRule::Arr ? "arr" : "prod"; }

std::string trace_to_text(const EtaTrace& t) {
  std::string out;
  for (const auto& s : t.steps) {
    out += path_to_string(s.at);
    out += ' ';
    out += eta_rule_name(s.rule);
    out += '\n';
  }
  return out;
}

EtaTrace trace_from_text(std::string_view text) {
  EtaTrace t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream words(line);
    std::string path, rule, extra;
    if (!(words >> path) || path[0] == '#') continue;
    if (!(words >> rule) || (words >> extra))
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": expected '<path> <rule>'");
    EtaRule r;
    if (rule == "arr") {
      r = EtaRule::Arr;
    } else if (rule == "prod") {
      r = EtaRule::Prod;
    } else {
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": unknown rule '" + rule + "'");
    }
    try {
      t.steps.push_back({path_from_string(path), r});
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return t;
}

}  // namespace etaflat
