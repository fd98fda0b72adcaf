#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "idq/rules.hpp"
#include "idq/state.hpp"

namespace idq {

enum class VariableOrder { Static, Activity };
enum class CegarMode { Off, On, Hybrid };

struct EngineConfig {
  VariableOrder order = VariableOrder::Activity;
  CegarMode cegar = CegarMode::Off;
  bool expansion = false;
  unsigned expansion_trigger = 32;
  bool hybrid_refine_and_learn = true;
  // Refine with the residue of C(0) over unconditional D(0) instead of the
  // matrix residue over X.
  bool restricted_refinement = false;
  std::optional<std::uint64_t> conflict_limit;
  std::optional<double> time_limit_seconds;
  std::optional<std::uint64_t> sat_conflict_budget;
  std::uint64_t seed = 0;
  // Audit invariants after every transition.
  bool debug_invariants = false;
  // Before every Learn, confirm the clause is not equivalent to a clause
  // already in C(0).
  bool check_progress = false;
  // Largest decision clause set tried before switching polarity.
  std::size_t decision_cap = 4096;
};

enum class Result { True, False, Unknown };
const char* to_string(Result r);

struct Statistics {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t refinements = 0;
  std::uint64_t closed_cases = 0;
  std::uint64_t learnt = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t assumptions = 0;
  std::uint64_t sat_queries = 0;
  double elapsed_ms = 0;
};

struct Verdict {
  Result result = Result::Unknown;
  std::string reason;  // why the run ended without an answer
  Statistics stats;
  std::vector<std::string> invariant_violations;
  std::vector<std::string> progress_violations;
};

// Decision clauses for v: the CNF of (not A_l => not l) for the chosen
// polarity, built by distributing A_l over its cubes. Empty optional if the
// result would exceed `cap` clauses.
std::optional<std::vector<std::vector<Lit>>> decision_clauses(SolverState& s, Var v, bool positive,
                                                              std::size_t cap);
// Polarity choice and fallback between polarities.
std::vector<std::vector<Lit>> make_decision(SolverState& s, Var v, std::size_t cap = 4096);

class Engine {
 public:
  explicit Engine(EngineConfig config = {});

  Verdict solve(std::shared_ptr<const PrenexFormula> formula);
  // Continues from an arbitrary state, e.g. after a scripted prefix.
  Verdict run(SolverState& s);

  // Applied rule applications of the last solve/run, if recording is on.
  void record_trace(bool on) { record_ = on; }
  const std::vector<rules::RuleApplication>& trace() const { return trace_; }

  const EngineConfig& config() const { return config_; }

 private:
  struct Stop {
    std::string reason;
  };

  void step(SolverState& s, const rules::RuleApplication& app);
  bool try_propagate(SolverState& s, Var v);
  bool propagate_fixpoint(SolverState& s);
  bool find_conflict(SolverState& s);
  void conflict_policy(SolverState& s);
  void learning_path(SolverState& s, bool refined);
  std::optional<Lit> pick_assumption(SolverState& s);
  std::optional<Var> pick_decision(SolverState& s);
  std::vector<Var> ordered(std::vector<Var> vars) const;
  void bump(std::span<const Lit> lits);
  void check_budgets();

  EngineConfig config_;
  bool record_ = false;
  std::vector<rules::RuleApplication> trace_;
  Verdict verdict_;
  std::vector<double> activity_;
  double bump_inc_ = 1.0;
  std::uint64_t decisions_since_case_ = 0;
  bool domain_dirty_ = true;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace idq
