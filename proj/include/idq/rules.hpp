#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "idq/state.hpp"

namespace idq::rules {

enum class Rule {
  Propagate,
  Decide,
  Sat,
  Conflict,
  Analyze,
  Learn,
  Unsat,
  Backtrack,
  InductiveRefinement,
  Failed,
  Assume,
  Close,
  SatByEmptyDomain,
};

// Upper-case token used in traces, e.g. "PROPAGATE".
const char* rule_token(Rule r);
std::optional<Rule> rule_from_token(std::string_view token);

struct Propagate {
  Var v;
  friend bool operator==(const Propagate&, const Propagate&) = default;
};
struct Decide {
  Var v;
  std::vector<std::vector<Lit>> delta;
  friend bool operator==(const Decide&, const Decide&) = default;
};
struct Sat {
  friend bool operator==(const Sat&, const Sat&) = default;
};
struct Conflict {
  Var v;
  std::vector<Lit> witness;
  friend bool operator==(const Conflict&, const Conflict&) = default;
};
struct Analyze {
  Lit pivot;  // literal of the current conflict clause
  ClauseId clause;
  friend bool operator==(const Analyze&, const Analyze&) = default;
};
struct Learn {
  friend bool operator==(const Learn&, const Learn&) = default;
};
struct Unsat {
  friend bool operator==(const Unsat&, const Unsat&) = default;
};
struct Backtrack {
  int level;
  friend bool operator==(const Backtrack&, const Backtrack&) = default;
};
// With `restricted` off the response assigns Y and the refinement excludes
// the matrix residue over X. With it on, the response assigns the variables
// outside unconditional D(0) and the refinement excludes the residue of C(0)
// over unconditional D(0).
struct InductiveRefinement {
  std::vector<Lit> response;
  bool restricted = false;
  friend bool operator==(const InductiveRefinement&, const InductiveRefinement&) = default;
};
struct Failed {
  friend bool operator==(const Failed&, const Failed&) = default;
};
struct Assume {
  Lit lit;
  friend bool operator==(const Assume&, const Assume&) = default;
};
struct Close {
  friend bool operator==(const Close&, const Close&) = default;
};
struct SatByEmptyDomain {
  friend bool operator==(const SatByEmptyDomain&, const SatByEmptyDomain&) = default;
};

using RuleApplication = std::variant<Propagate, Decide, Sat, Conflict, Analyze, Learn, Unsat, Backtrack,
                                     InductiveRefinement, Failed, Assume, Close, SatByEmptyDomain>;

Rule rule_of(const RuleApplication& app);

struct GuardViolation {
  Rule rule;
  std::string premise;
};

// nullopt on success. On a violation the logical state is unchanged.
using RuleResult = std::optional<GuardViolation>;

RuleResult apply(SolverState& s, const RuleApplication& app);

RuleResult propagate(SolverState& s, Var v);
RuleResult decide(SolverState& s, Var v, const std::vector<std::vector<Lit>>& delta);
RuleResult sat(SolverState& s);
RuleResult conflict(SolverState& s, Var v, const std::vector<Lit>& witness);
RuleResult analyze(SolverState& s, Lit pivot, ClauseId c);
RuleResult learn(SolverState& s);
RuleResult unsat(SolverState& s);
RuleResult backtrack(SolverState& s, int dlvl);
RuleResult inductive_refinement(SolverState& s, const std::vector<Lit>& response, bool restricted);
RuleResult failed(SolverState& s);
RuleResult assume(SolverState& s, Lit l);
RuleResult close(SolverState& s);
RuleResult sat_by_empty_domain(SolverState& s);

// The clause set excluded by a refinement with the given response, computed
// exactly as inductive_refinement does. Requires a status of Conflict.
std::vector<std::vector<Lit>> refinement_residue(const SolverState& s, const std::vector<Lit>& response,
                                                 bool restricted);

}  // namespace idq::rules
