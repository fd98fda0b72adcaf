#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "idq/literal.hpp"

namespace idq::sat {

// Thrown by Context::solve when the per-call conflict budget runs out.
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit() : std::runtime_error("SAT conflict budget exhausted") {}
};

enum class Outcome { Sat, Unsat };

using GroupId = std::uint32_t;

struct Stats {
  std::uint64_t solves = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
};

// Incremental CDCL solver: two watched literals, first-UIP learning with basic
// minimization, VSIDS, phase saving, Luby restarts.
//
// Clause groups are realized with activation literals. A clause in group g is
// stored as (clause | s_g); solve() assumes -s_g for every enabled group, and
// release_group() adds the unit s_g, retiring the group's clauses for good.
class Context {
 public:
  Context() = default;

  // A variable owned by a group stops being a branching candidate once the
  // group is released; it must occur only in that group's clauses.
  Var new_var(std::optional<GroupId> owner = std::nullopt);
  // Makes sure variables 1..n exist.
  void reserve_vars(Var n);
  Var num_vars() const { return static_cast<Var>(activity_.size()) - 1; }

  // The selector is a fresh variable, so reserve problem variables first.
  GroupId new_group();
  void release_group(GroupId g);
  void set_group_enabled(GroupId g, bool enabled);
  bool group_live(GroupId g) const { return g < groups_.size() && groups_[g].live; }

  // Variables are allocated implicitly. The clause may be empty.
  void add_clause(std::span<const Lit> lits, std::optional<GroupId> group = std::nullopt);
  void add_clause(std::initializer_list<Lit> lits, std::optional<GroupId> group = std::nullopt) {
    add_clause(std::span<const Lit>(lits.begin(), lits.size()), group);
  }

  Outcome solve(std::span<const Lit> assumptions = {});
  Outcome solve(std::initializer_list<Lit> assumptions) {
    return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
  }

  // Model of the last satisfiable solve().
  Value model_value(Var v) const { return v < model_.size() ? model_[v] : Value::Unassigned; }
  Value model_value(Lit l) const;
  bool model_true(Lit l) const { return model_value(l) == Value::True; }

  // Conflicts allowed per solve() call; nullopt means unlimited.
  void set_conflict_budget(std::optional<std::uint64_t> budget) { budget_ = budget; }

  // True if the last model satisfies every non-learnt clause whose group is
  // enabled (or that has no group).
  bool model_satisfies_active_clauses() const;

  const Stats& stats() const { return stats_; }
  std::size_t num_clauses() const { return num_original_; }

 private:
  using ILit = std::uint32_t;  // 2v or 2v+1
  static constexpr std::uint32_t kNoReason = UINT32_MAX;

  struct ClauseData {
    std::vector<ILit> lits;
    double activity = 0;
    bool learnt = false;
    bool deleted = false;
    std::int32_t group = -1;
  };
  struct Watch {
    std::uint32_t cref;
    ILit blocker;
  };
  struct Group {
    Var selector;
    bool live = true;
    bool enabled = true;
    std::vector<Var> owned;
  };

  static ILit to_ilit(Lit l) { return static_cast<ILit>(l.index()); }
  static ILit neg(ILit i) { return i ^ 1u; }
  static Var var_of(ILit i) { return i >> 1; }

  Value value(ILit i) const {
    Value v = assigns_[var_of(i)];
    if ((i & 1) == 0 || v == Value::Unassigned) return v;
    return v == Value::True ? Value::False : Value::True;
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(ILit p, std::uint32_t reason);
  std::uint32_t propagate();
  void analyze(std::uint32_t confl, std::vector<ILit>& learnt, int& bt_level);
  bool redundant(ILit p, std::uint32_t abstract_levels);
  void cancel_until(int level);
  std::optional<ILit> pick_branch();
  void attach(std::uint32_t cref);
  std::uint32_t store(std::vector<ILit> lits, bool learnt, std::int32_t group);
  void bump_var(Var v);
  void bump_clause(ClauseData& c);
  void decay();
  void reduce_db();
  void simplify_root();
  void collect_garbage();
  enum class SearchResult { Sat, Unsat, Restart };
  SearchResult search(const std::vector<ILit>& assumptions, std::int64_t conflicts_this_restart,
                      std::uint64_t start_conflicts);

  // Heap of unassigned variables keyed by activity.
  void heap_insert(Var v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  Var heap_pop();
  bool heap_less(Var a, Var b) const { return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b); }

  bool ok_ = true;
  std::vector<ClauseData> clauses_;
  std::vector<std::vector<Watch>> watches_ = std::vector<std::vector<Watch>>(2);
  std::vector<Value> assigns_{Value::Unassigned};
  std::vector<char> retired_{1};
  std::vector<int> level_{0};
  std::vector<std::uint32_t> reason_{kNoReason};
  std::vector<double> activity_{0.0};
  std::vector<bool> phase_{false};
  std::vector<char> seen_{0};
  std::vector<ILit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<Var> heap_;
  std::vector<std::int32_t> heap_index_{-1};
  std::vector<Group> groups_;
  std::vector<Value> model_;
  std::vector<ILit> analyze_stack_;
  std::vector<ILit> analyze_toclear_;

  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::size_t num_original_ = 0;
  std::size_t num_learnt_ = 0;
  std::size_t wasted_ = 0;
  double max_learnts_ = 2000;
  std::size_t root_simplified_at_ = 0;
  std::optional<std::uint64_t> budget_;
  Stats stats_;
};

}  // namespace idq::sat
