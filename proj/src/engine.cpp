#include "idq/engine.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "idq/oracle.hpp"

namespace idq {

const char* to_string(Result r) {
  switch (r) {
    case Result::True: return "TRUE";
    case Result::False: return "FALSE";
    case Result::Unknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

using Cubes = std::vector<std::vector<Lit>>;

Cubes antecedent_cubes(const SolverState& s, Lit l) {
  Cubes cubes;
  for (ClauseId id : s.unique_consequences(l.var())) {
    const Clause& c = s.clause(id);
    if (!c.contains(l)) continue;
    std::vector<Lit> cube;
    for (Lit m : c.literals())
      if (m.var() != l.var()) cube.push_back(~m);
    cubes.push_back(std::move(cube));
  }
  return cubes;
}

bool subset(const std::vector<Lit>& a, const std::vector<Lit>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Keeps the clauses not subsumed by another one. Input is sorted and
// duplicate-free.
void drop_subsumed(std::vector<std::vector<Lit>>& cs) {
  std::stable_sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<std::vector<Lit>> kept;
  for (auto& c : cs) {
    bool sub = std::any_of(kept.begin(), kept.end(), [&](const auto& k) { return subset(k, c); });
    if (!sub) kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end());
  cs = std::move(kept);
}

bool lits_less(const std::vector<Lit>& a, const std::vector<Lit>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::optional<std::vector<std::vector<Lit>>> decision_clauses(SolverState& s, Var v, bool positive,
                                                              std::size_t cap) {
  // positive: CNF(A_-v | v); negative: CNF(A_v | -v).
  const Lit tail = Lit::make(v, positive);
  Cubes cubes = antecedent_cubes(s, ~tail);
  std::vector<std::vector<Lit>> acc{{}};
  for (const auto& cube : cubes) {
    std::vector<std::vector<Lit>> next;
    for (const auto& c : acc)
      for (Lit l : cube) {
        std::vector<Lit> d = c;
        d.push_back(l);
        if (!normalize_literals(d)) continue;
        next.push_back(std::move(d));
      }
    std::sort(next.begin(), next.end(), lits_less);
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next.size() > cap) return std::nullopt;
    drop_subsumed(next);
    acc = std::move(next);
  }
  for (auto& c : acc) {
    c.push_back(tail);
    std::sort(c.begin(), c.end());
  }
  std::sort(acc.begin(), acc.end(), lits_less);
  return acc;
}

std::vector<std::vector<Lit>> make_decision(SolverState& s, Var v, std::size_t cap) {
  // Prefer v = false unless -v is pure: every clause with -v is a unique
  // consequence while some clause with v is not yet.
  auto uv = s.unique_consequences(v);
  std::set<ClauseId> in_uv(uv.begin(), uv.end());
  bool neg_all_unique = true;
  bool pos_all_unique = true;
  for (ClauseId id : s.live_clauses()) {
    if (s.is_marker(id)) continue;
    const Clause& c = s.clause(id);
    if (c.contains(Lit::neg(v)) && !in_uv.count(id)) neg_all_unique = false;
    if (c.contains(Lit::pos(v)) && !in_uv.count(id)) pos_all_unique = false;
  }
  const bool positive = neg_all_unique && !pos_all_unique;
  if (auto d = decision_clauses(s, v, positive, cap)) return *d;
  if (auto d = decision_clauses(s, v, !positive, cap)) return *d;
  if (auto d = decision_clauses(s, v, positive, cap * 64)) return *d;
  throw sat::ResourceLimit();
}

Engine::Engine(EngineConfig config) : config_(std::move(config)) {}

Verdict Engine::solve(std::shared_ptr<const PrenexFormula> formula) {
  SolverState s(std::move(formula));
  return run(s);
}

void Engine::check_budgets() {
  if (config_.time_limit_seconds) {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (secs > *config_.time_limit_seconds) throw Stop{"time limit"};
  }
}

void Engine::step(SolverState& s, const rules::RuleApplication& app) {
  if (auto g = rules::apply(s, app))
    throw std::logic_error(std::string("engine chose an inapplicable ") + rules::rule_token(g->rule) + ": " +
                           g->premise);
  Statistics& st = verdict_.stats;
  switch (rules::rule_of(app)) {
    case rules::Rule::Propagate: ++st.propagations; break;
    case rules::Rule::Decide:
      ++st.decisions;
      ++decisions_since_case_;
      break;
    case rules::Rule::Conflict: ++st.conflicts; break;
    case rules::Rule::Learn: ++st.learnt; break;
    case rules::Rule::Backtrack: ++st.backtracks; break;
    case rules::Rule::InductiveRefinement:
      ++st.refinements;
      domain_dirty_ = true;
      break;
    case rules::Rule::Assume:
      ++st.assumptions;
      decisions_since_case_ = 0;
      break;
    case rules::Rule::Close:
      ++st.closed_cases;
      decisions_since_case_ = 0;
      domain_dirty_ = true;
      break;
    default: break;
  }
  if (record_) trace_.push_back(app);
  if (config_.debug_invariants) {
    for (auto& v : s.audit_invariants())
      verdict_.invariant_violations.push_back("after " + std::string(rules::rule_token(rules::rule_of(app))) +
                                              ": " + v);
  }
}

bool Engine::try_propagate(SolverState& s, Var v) {
  if (rules::propagate(s, v)) return false;
  ++verdict_.stats.propagations;
  if (record_) trace_.push_back(rules::Propagate{v});
  if (config_.debug_invariants)
    for (auto& msg : s.audit_invariants()) verdict_.invariant_violations.push_back("after PROPAGATE: " + msg);
  return true;
}

bool Engine::propagate_fixpoint(SolverState& s) {
  bool any = false;
  for (bool changed = true; changed;) {
    changed = false;
    for (Var v : s.formula().existentials()) {
      if (s.in_d(v)) continue;
      if (try_propagate(s, v)) changed = any = true;
    }
  }
  return any;
}

bool Engine::find_conflict(SolverState& s) {
  for (Var v : s.formula().existentials()) {
    if (s.in_d(v)) continue;
    if (auto w = s.check_unconflicted(v)) {
      step(s, rules::Conflict{v, *w});
      return true;
    }
  }
  return false;
}

void Engine::bump(std::span<const Lit> lits) {
  for (Lit l : lits) activity_[l.var()] += bump_inc_;
  bump_inc_ /= 0.95;
  if (bump_inc_ > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    bump_inc_ *= 1e-100;
  }
}

void Engine::learning_path(SolverState& s, bool refined) {
  const ConflictData cd = *s.conflict();
  const Var v = cd.variable;
  const Assignment x(cd.witness);

  auto others_false = [&](const Clause& c, Var skip) {
    return std::all_of(c.literals().begin(), c.literals().end(),
                       [&](Lit m) { return m.var() == skip || x.is_false(m); });
  };

  if (cd.clause.size() == 2 && cd.clause[0].var() == cd.clause[1].var()) {
    // Resolve the nucleus with the pair of unique consequences whose
    // antecedents the witness fires.
    std::optional<ClauseId> c1, c2;
    for (ClauseId id : s.unique_consequences(v)) {
      const Clause& c = s.clause(id);
      if (!others_false(c, v)) continue;
      if (!c1 && c.contains(Lit::pos(v))) c1 = id;
      if (!c2 && c.contains(Lit::neg(v))) c2 = id;
    }
    if (!c1 || !c2) throw std::logic_error("conflict without a firing pair of unique consequences");
    if (s.clause_level(*c1) != 0 || s.clause_level(*c2) != 0)
      throw std::logic_error("conflicting pair outside C(0)");
    step(s, rules::Analyze{Lit::neg(v), *c1});
    step(s, rules::Analyze{Lit::pos(v), *c2});
  }

  // Resolve out the most recently inserted literal at the deepest level while
  // that level holds more than one literal and its defining clause is in C(0).
  for (;;) {
    const auto& l = s.conflict()->clause;
    int k = 0;
    for (Lit m : l) k = std::max(k, s.d_level(m.var()));
    if (k == 0) break;
    std::optional<Lit> last;
    int at_k = 0;
    for (Lit m : l) {
      if (s.d_level(m.var()) != k) continue;
      ++at_k;
      if (!last || s.d_order(m.var()) > s.d_order(last->var())) last = m;
    }
    if (at_k < 2) break;
    const Var u = last->var();
    std::optional<ClauseId> reason;
    for (ClauseId id : s.level0_clauses()) {
      if (s.is_marker(id)) continue;
      const Clause& d = s.clause(id);
      if (!d.contains(~*last) || !others_false(d, u)) continue;
      bool earlier = std::all_of(d.literals().begin(), d.literals().end(), [&](Lit m) {
        return m.var() == u || (s.in_d(m.var()) && s.d_order(m.var()) < s.d_order(u));
      });
      if (earlier) {
        reason = id;
        break;
      }
    }
    if (!reason) break;
    step(s, rules::Analyze{*last, *reason});
  }

  const std::vector<Lit> l = s.conflict()->clause;
  bool in_d0 = std::all_of(l.begin(), l.end(), [&](Lit m) { return s.in_d0(m.var()); });
  if (in_d0) {
    if (refined) throw std::logic_error("clause over D(0) after a successful refinement");
    step(s, rules::Unsat{});
    return;
  }
  int k = 0;
  for (Lit m : l) k = std::max(k, s.d_level(m.var()));
  if (k > 0) step(s, rules::Backtrack{k});

  if (config_.check_progress) {
    std::vector<std::vector<Lit>> learnt{l};
    std::set<Var> lvars;
    for (Lit m : l) lvars.insert(m.var());
    for (ClauseId id : s.level0_clauses()) {
      if (s.is_marker(id)) continue;
      const Clause& c = s.clause(id);
      std::set<Var> cvars;
      for (Lit m : c.literals()) cvars.insert(m.var());
      if (cvars != lvars) continue;
      std::vector<std::vector<Lit>> existing{{c.literals().begin(), c.literals().end()}};
      if (oracle::clause_set_equivalent(learnt, existing))
        verdict_.progress_violations.push_back("learnt clause equivalent to clause " + std::to_string(id));
    }
  }
  step(s, rules::Learn{});
  bump(l);
}

void Engine::conflict_policy(SolverState& s) {
  if (config_.conflict_limit && verdict_.stats.conflicts > *config_.conflict_limit) throw Stop{"conflict limit"};
  if (config_.cegar == CegarMode::Off) {
    learning_path(s, false);
    return;
  }
  const PrenexFormula& f = s.formula();
  const ConflictData cd = *s.conflict();
  std::vector<Lit> xs;
  for (Lit l : cd.witness)
    if (f.is_universal(l.var())) xs.push_back(l);
  std::vector<Lit> model;
  if (!s.matrix_satisfiable(xs, &model)) {
    step(s, rules::Failed{});
    return;
  }
  bool refined = false;
  if (config_.restricted_refinement) {
    std::vector<Lit> fixed;
    for (Lit l : cd.witness)
      if (s.in_d0(l.var()) && !s.conditional(l.var())) fixed.push_back(l);
    std::vector<Lit> m2;
    if (s.matrix_satisfiable(fixed, &m2)) {
      std::vector<Lit> y;
      for (Lit l : m2)
        if (f.is_existential(l.var()) && !(s.in_d0(l.var()) && !s.conditional(l.var()))) y.push_back(l);
      step(s, rules::InductiveRefinement{y, true});
      refined = true;
    }
  }
  if (!refined) {
    std::vector<Lit> y;
    for (Lit l : model)
      if (f.is_existential(l.var())) y.push_back(l);
    step(s, rules::InductiveRefinement{y, false});
  }
  const auto& l = s.conflict()->clause;
  const bool nucleus = l.size() == 2 && l[0].var() == l[1].var();
  if ((config_.cegar == CegarMode::Hybrid && config_.hybrid_refine_and_learn) || !nucleus)
    learning_path(s, true);
  else
    step(s, rules::Learn{});
}

std::vector<Var> Engine::ordered(std::vector<Var> vars) const {
  if (config_.order == VariableOrder::Static) {
    std::sort(vars.begin(), vars.end());
  } else {
    std::sort(vars.begin(), vars.end(), [&](Var a, Var b) {
      return activity_[a] != activity_[b] ? activity_[a] > activity_[b] : a < b;
    });
  }
  return vars;
}

std::optional<Var> Engine::pick_decision(SolverState& s) {
  std::vector<Var> cand;
  for (Var v : s.formula().existentials())
    if (!s.in_d(v)) cand.push_back(v);
  if (cand.empty()) return std::nullopt;
  return ordered(std::move(cand)).front();
}

std::optional<Lit> Engine::pick_assumption(SolverState& s) {
  std::vector<Var> cand;
  for (Var u : s.formula().universals()) {
    bool assumed = std::any_of(s.assumption().begin(), s.assumption().end(), [&](Lit a) { return a.var() == u; });
    if (!assumed) cand.push_back(u);
  }
  for (Var u : ordered(std::move(cand)))
    for (bool pos : {true, false}) {
      Lit l = Lit::make(u, pos);
      if (s.domain_admits(std::span<const Lit>(&l, 1))) return l;
    }
  return std::nullopt;
}

Verdict Engine::run(SolverState& s) {
  verdict_ = Verdict{};
  trace_.clear();
  start_ = std::chrono::steady_clock::now();
  decisions_since_case_ = 0;
  domain_dirty_ = true;
  bump_inc_ = 1.0;
  activity_.assign(s.formula().max_var() + 1, 0.0);
  if (config_.order == VariableOrder::Activity) {
    std::mt19937_64 rng(config_.seed);
    std::uniform_real_distribution<double> jitter(0.0, 1e-3);
    for (double& a : activity_) a = jitter(rng);
  }
  s.set_sat_conflict_budget(config_.sat_conflict_budget);
  const std::uint64_t q0 = s.sat_queries();
  if (config_.debug_invariants)
    for (auto& v : s.audit_invariants()) verdict_.invariant_violations.push_back("initial: " + v);

  try {
    for (;;) {
      if (s.status() == Status::Sat) {
        verdict_.result = Result::True;
        break;
      }
      if (s.status() == Status::Unsat) {
        verdict_.result = Result::False;
        break;
      }
      check_budgets();
      if (s.status() == Status::Conflict) {
        conflict_policy(s);
        continue;
      }
      if (domain_dirty_) {
        domain_dirty_ = false;
        if (s.domain_empty()) {
          step(s, rules::SatByEmptyDomain{});
          continue;
        }
      }
      propagate_fixpoint(s);
      if (find_conflict(s)) continue;
      if (config_.expansion && decisions_since_case_ >= config_.expansion_trigger) {
        if (auto l = pick_assumption(s)) {
          if (s.height() > 1) step(s, rules::Backtrack{1});
          step(s, rules::Assume{*l});
          continue;
        }
        decisions_since_case_ = 0;
      }
      if (s.d_complete()) {
        if (s.assumption().empty()) step(s, rules::Sat{});
        else step(s, rules::Close{});
        continue;
      }
      Var v = *pick_decision(s);
      step(s, rules::Decide{v, make_decision(s, v, config_.decision_cap)});
      step(s, rules::Propagate{v});
    }
  } catch (const Stop& stop) {
    verdict_.result = Result::Unknown;
    verdict_.reason = stop.reason;
  } catch (const sat::ResourceLimit&) {
    verdict_.result = Result::Unknown;
    verdict_.reason = "SAT conflict budget";
  }
  verdict_.stats.sat_queries = s.sat_queries() - q0;
  verdict_.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  return verdict_;
}

}  // namespace idq
