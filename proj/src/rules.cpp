#include "idq/rules.hpp"

#include <algorithm>
#include <array>

namespace idq::rules {

namespace {

constexpr std::array<const char*, 13> kTokens = {
    "PROPAGATE", "DECIDE", "SAT",    "CONFLICT", "ANALYZE", "LEARN",           "UNSAT",
    "BACKTRACK", "REFINE", "FAILED", "ASSUME",   "CLOSE",   "SAT_EMPTY_DOMAIN",
};

GuardViolation violation(Rule r, std::string premise) { return GuardViolation{r, std::move(premise)}; }

bool valid_var(const SolverState& s, Var v) { return v >= 1 && v <= s.formula().max_var(); }

bool unconditional_d0(const SolverState& s, Var v) { return s.in_d0(v) && !s.conditional(v); }

RuleResult require_status(const SolverState& s, Rule r, Status want) {
  if (s.status() != want)
    return violation(r, std::string("status = ") + to_string(want) + " (is " + to_string(s.status()) + ")");
  return std::nullopt;
}

// Every variable of v's unique consequences other than v is in D, so A_l is
// decided by a total assignment to D.
bool antecedent_fires(const SolverState& s, const std::vector<ClauseId>& uv, Lit l, const Assignment& x) {
  for (ClauseId id : uv) {
    const Clause& c = s.clause(id);
    if (!c.contains(l)) continue;
    bool all_false = true;
    for (Lit m : c.literals())
      if (m.var() != l.var() && !x.is_false(m)) {
        all_false = false;
        break;
      }
    if (all_false) return true;
  }
  return false;
}

bool all_vars_in_d(const SolverState& s, std::span<const Lit> lits) {
  return std::all_of(lits.begin(), lits.end(), [&](Lit l) { return s.in_d(l.var()); });
}

}  // namespace

const char* rule_token(Rule r) { return kTokens[static_cast<std::size_t>(r)]; }

std::optional<Rule> rule_from_token(std::string_view token) {
  for (std::size_t i = 0; i < kTokens.size(); ++i)
    if (token == kTokens[i]) return static_cast<Rule>(i);
  return std::nullopt;
}

Rule rule_of(const RuleApplication& app) { return static_cast<Rule>(app.index()); }

RuleResult propagate(SolverState& s, Var v) {
  constexpr Rule r = Rule::Propagate;
  if (auto g = require_status(s, r, Status::Ready)) return g;
  if (!valid_var(s, v) || !s.formula().is_existential(v)) return violation(r, "v is an existential");
  if (s.in_d(v)) return violation(r, "v not in D");
  if (!s.check_deterministic(v)) return violation(r, "deterministic");
  if (s.check_unconflicted(v)) return violation(r, "unconflicted");
  s.raw_add_to_d(v);
  return std::nullopt;
}

RuleResult decide(SolverState& s, Var v, const std::vector<std::vector<Lit>>& delta) {
  constexpr Rule r = Rule::Decide;
  if (auto g = require_status(s, r, Status::Ready)) return g;
  if (!valid_var(s, v) || !s.formula().is_existential(v)) return violation(r, "v is an existential");
  if (s.in_d(v)) return violation(r, "v not in D");
  for (const auto& c : delta) {
    std::vector<Lit> lits = c;
    if (!normalize_literals(lits)) return violation(r, "delta clause is not tautological");
    bool has_v = false;
    for (Lit l : lits) {
      if (!valid_var(s, l.var())) return violation(r, "delta clause over formula variables");
      if (l.var() == v) has_v = true;
      else if (!s.in_d(l.var())) return violation(r, "delta clauses have unique consequence v");
    }
    if (!has_v) return violation(r, "delta clauses have unique consequence v");
  }
  s.raw_push_decision(delta);
  return std::nullopt;
}

RuleResult sat(SolverState& s) {
  constexpr Rule r = Rule::Sat;
  if (auto g = require_status(s, r, Status::Ready)) return g;
  if (!s.d_complete()) return violation(r, "D = X u Y");
  if (!s.assumption().empty()) return violation(r, "alpha = 1");
  s.raw_set_status(Status::Sat);
  return std::nullopt;
}

RuleResult conflict(SolverState& s, Var v, const std::vector<Lit>& witness) {
  constexpr Rule r = Rule::Conflict;
  if (auto g = require_status(s, r, Status::Ready)) return g;
  if (!valid_var(s, v) || !s.formula().is_existential(v)) return violation(r, "v is an existential");
  if (s.in_d(v)) return violation(r, "v not in D");

  Assignment x;
  std::size_t assigned = 0;
  for (Lit l : witness) {
    if (!valid_var(s, l.var()) || !s.in_d(l.var()) || x.assigned(l.var()))
      return violation(r, "witness is an assignment to D");
    x.set(l);
    ++assigned;
  }
  if (assigned != s.d_vars().size()) return violation(r, "witness is an assignment to D");

  for (ClauseId id : s.live_clauses()) {
    if (s.is_marker(id)) continue;
    const Clause& c = s.clause(id);
    if (all_vars_in_d(s, c.literals()) && !c.satisfied_by(x)) return violation(r, "witness satisfies C|_D");
  }
  if (!s.domain_holds(x)) return violation(r, "witness satisfies chi");
  if (!s.assumption_holds(x)) return violation(r, "witness satisfies alpha");
  auto uv = s.unique_consequences(v);
  if (!antecedent_fires(s, uv, Lit::pos(v), x) || !antecedent_fires(s, uv, Lit::neg(v), x))
    return violation(r, "witness satisfies A_v and A_-v");

  std::vector<Lit> sorted = witness;
  std::sort(sorted.begin(), sorted.end());
  s.raw_set_conflict(ConflictData{{Lit::pos(v), Lit::neg(v)}, std::move(sorted), v});
  return std::nullopt;
}

RuleResult analyze(SolverState& s, Lit pivot, ClauseId id) {
  constexpr Rule r = Rule::Analyze;
  if (auto g = require_status(s, r, Status::Conflict)) return g;
  if (!s.alive(id) || s.clause_level(id) != 0 || s.is_marker(id)) return violation(r, "c in C(0)");
  const auto& l = s.conflict()->clause;
  if (std::find(l.begin(), l.end(), pivot) == l.end()) return violation(r, "l in L");
  const Clause& c = s.clause(id);
  if (!c.contains(~pivot)) return violation(r, "-l in c");

  // Drop the pivot occurrence from L and its complement from c.
  std::vector<Lit> res;
  bool dropped = false;
  for (Lit m : l) {
    if (!dropped && m == pivot) {
      dropped = true;
      continue;
    }
    res.push_back(m);
  }
  for (Lit m : c.literals())
    if (m != ~pivot) res.push_back(m);
  std::sort(res.begin(), res.end());
  res.erase(std::unique(res.begin(), res.end()), res.end());
  std::vector<Lit> check = res;
  if (!normalize_literals(check) && !(res.size() == 2 && res[0].var() == res[1].var()))
    return violation(r, "resolvent is not tautological");
  s.raw_set_conflict_clause(std::move(res));
  return std::nullopt;
}

RuleResult learn(SolverState& s) {
  constexpr Rule r = Rule::Learn;
  if (auto g = require_status(s, r, Status::Conflict)) return g;
  if (all_vars_in_d(s, s.conflict()->clause)) return violation(r, "var(L) ⊆ D");
  s.raw_learn();
  return std::nullopt;
}

RuleResult unsat(SolverState& s) {
  constexpr Rule r = Rule::Unsat;
  if (auto g = require_status(s, r, Status::Conflict)) return g;
  const ConflictData& cd = *s.conflict();
  for (Lit l : cd.clause)
    if (!s.in_d0(l.var())) return violation(r, "var(L) subset of D(0)");
  Assignment x(cd.witness);
  for (Lit l : cd.clause)
    if (!x.is_false(l)) return violation(r, "witness falsifies L");
  if (!s.domain_holds(x)) return violation(r, "witness satisfies chi");
  s.raw_set_status(Status::Unsat);
  return std::nullopt;
}

RuleResult backtrack(SolverState& s, int dlvl) {
  constexpr Rule r = Rule::Backtrack;
  if (s.status() == Status::Sat || s.status() == Status::Unsat) return violation(r, "status not terminal");
  if (dlvl <= 0 || dlvl > s.height()) return violation(r, "0 < dlvl <= |C|");
  s.raw_truncate(dlvl);
  return std::nullopt;
}

std::vector<std::vector<Lit>> refinement_residue(const SolverState& s, const std::vector<Lit>& response,
                                                 bool restricted) {
  Assignment y(response);
  std::vector<std::vector<Lit>> out;
  auto add = [&](const Clause& c) {
    if (c.satisfied_by(y)) return;
    std::vector<Lit> rest;
    for (Lit l : c.literals())
      if (!y.assigned(l.var())) rest.push_back(l);
    out.push_back(std::move(rest));
  };
  if (restricted) {
    for (ClauseId id : s.level0_clauses())
      if (!s.is_marker(id)) add(s.clause(id));
  } else {
    for (const Clause& c : s.formula().matrix()) add(c);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RuleResult inductive_refinement(SolverState& s, const std::vector<Lit>& response, bool restricted) {
  constexpr Rule r = Rule::InductiveRefinement;
  if (auto g = require_status(s, r, Status::Conflict)) return g;
  const PrenexFormula& f = s.formula();
  // The response must assign exactly the free side of the substitution.
  auto on_response_side = [&](Var v) {
    return restricted ? f.is_existential(v) && !unconditional_d0(s, v) : f.is_existential(v);
  };
  Assignment y;
  std::size_t n = 0;
  for (Lit l : response) {
    if (!valid_var(s, l.var()) || !on_response_side(l.var()) || y.assigned(l.var()))
      return violation(r, "response assigns the existentials");
    y.set(l);
    ++n;
  }
  std::size_t want = 0;
  for (Var v = 1; v <= f.max_var(); ++v)
    if (on_response_side(v)) ++want;
  if (n != want) return violation(r, "response assigns the existentials");

  // Fixed side of the conflict witness: X, or unconditional D(0).
  Assignment xy = y;
  for (Lit l : s.conflict()->witness)
    if (restricted ? unconditional_d0(s, l.var()) : f.is_universal(l.var())) xy.set(l);
  if (restricted) {
    for (ClauseId id : s.level0_clauses())
      if (!s.is_marker(id) && !s.clause(id).satisfied_by(xy)) return violation(r, "response satisfies C(0)");
  } else {
    for (const Clause& c : f.matrix())
      if (!c.satisfied_by(xy)) return violation(r, "response satisfies the matrix");
  }
  s.raw_add_domain_record(DomainRecord{DomainRecord::Kind::Refinement, refinement_residue(s, response, restricted)});
  return std::nullopt;
}

RuleResult failed(SolverState& s) {
  constexpr Rule r = Rule::Failed;
  if (auto g = require_status(s, r, Status::Conflict)) return g;
  if (!s.formula().trivially_false()) {
    std::vector<Lit> xs;
    for (Lit l : s.conflict()->witness)
      if (s.formula().is_universal(l.var())) xs.push_back(l);
    if (s.matrix_satisfiable(xs)) return violation(r, "matrix unsatisfiable under the witness");
  }
  s.raw_set_status(Status::Unsat);
  return std::nullopt;
}

RuleResult assume(SolverState& s, Lit l) {
  constexpr Rule r = Rule::Assume;
  if (auto g = require_status(s, r, Status::Ready)) return g;
  if (!valid_var(s, l.var()) || !unconditional_d0(s, l.var())) return violation(r, "var(l) in D(0)");
  for (Lit a : s.assumption())
    if (a.var() == l.var()) return violation(r, "var(l) not assumed");
  s.raw_assume(l);
  return std::nullopt;
}

RuleResult close(SolverState& s) {
  constexpr Rule r = Rule::Close;
  if (auto g = require_status(s, r, Status::Ready)) return g;
  if (!s.d_complete()) return violation(r, "D = X u Y");
  s.raw_close();
  return std::nullopt;
}

RuleResult sat_by_empty_domain(SolverState& s) {
  constexpr Rule r = Rule::SatByEmptyDomain;
  if (auto g = require_status(s, r, Status::Ready)) return g;
  if (!s.domain_empty()) return violation(r, "chi unsatisfiable");
  s.raw_set_status(Status::Sat);
  return std::nullopt;
}

RuleResult apply(SolverState& s, const RuleApplication& app) {
  return std::visit(
      [&](const auto& a) -> RuleResult {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Propagate>) return propagate(s, a.v);
        else if constexpr (std::is_same_v<T, Decide>) return decide(s, a.v, a.delta);
        else if constexpr (std::is_same_v<T, Sat>) return sat(s);
        else if constexpr (std::is_same_v<T, Conflict>) return conflict(s, a.v, a.witness);
        else if constexpr (std::is_same_v<T, Analyze>) return analyze(s, a.pivot, a.clause);
        else if constexpr (std::is_same_v<T, Learn>) return learn(s);
        else if constexpr (std::is_same_v<T, Unsat>) return unsat(s);
        else if constexpr (std::is_same_v<T, Backtrack>) return backtrack(s, a.level);
        else if constexpr (std::is_same_v<T, InductiveRefinement>)
          return inductive_refinement(s, a.response, a.restricted);
        else if constexpr (std::is_same_v<T, Failed>) return failed(s);
        else if constexpr (std::is_same_v<T, Assume>) return assume(s, a.lit);
        else if constexpr (std::is_same_v<T, Close>) return close(s);
        else return sat_by_empty_domain(s);
      },
      app);
}

}  // namespace idq::rules
