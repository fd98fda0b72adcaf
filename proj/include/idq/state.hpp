#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idq/formula.hpp"
#include "idq/satcore.hpp"

namespace idq {

enum class Status { Ready, Conflict, Sat, Unsat };

const char* to_string(Status s);

// Conflict(L, x): the clause under analysis, the witness assignment over D,
// and the variable whose conflict opened the analysis.
struct ConflictData {
  std::vector<Lit> clause;
  std::vector<Lit> witness;
  Var variable = 0;

  friend bool operator==(const ConflictData&, const ConflictData&) = default;
};

// One conjunct of the domain: chi &= not(AND excluded). A CEGAR refinement
// excludes the residual clause set left by a response; a closed case excludes
// the assumption cube, stored as unit clauses.
struct DomainRecord {
  enum class Kind { Refinement, ClosedCase };
  Kind kind = Kind::Refinement;
  std::vector<std::vector<Lit>> excluded;

  bool holds_under(const Assignment& a) const;
  friend bool operator==(const DomainRecord&, const DomainRecord&) = default;
};

// Adds the encoding of not(AND record.excluded) to `ctx`.
void encode_domain_record(sat::Context& ctx, const DomainRecord& record, std::optional<sat::GroupId> group);

// A_l as the symbolic cube list plus a literal a_l with a_l <-> A_l in the
// solver's SAT context.
struct Antecedent {
  Lit handle;
  std::vector<std::vector<Lit>> cubes;
};

// The solver state (S, C, D, chi, alpha).
//
// The unique-consequence index keeps, for every live clause, the number of its
// variables outside D. Clauses whose count drops to zero form C|_D and are
// loaded into the incremental SAT context in a group per activation tier:
// tier 0 holds clauses over unconditional D(0), tier 1 clauses touching
// existentials propagated into D(0) under a non-trivial assumption, tier k+1
// clauses that depend on decision level k. Backtrack and Close release the
// tiers they remove.
class SolverState {
 public:
  explicit SolverState(std::shared_ptr<const PrenexFormula> formula);

  const PrenexFormula& formula() const { return *formula_; }
  std::shared_ptr<const PrenexFormula> formula_ptr() const { return formula_; }

  Status status() const { return status_; }
  const ConflictData* conflict() const { return status_ == Status::Conflict ? &conflict_ : nullptr; }

  // |C| == |D|.
  int height() const { return static_cast<int>(var_levels_.size()); }

  bool in_d(Var v) const { return v < level_of_.size() && level_of_[v] >= 0; }
  bool in_d0(Var v) const { return v < level_of_.size() && level_of_[v] == 0; }
  // Existential in D(0) that was propagated while the assumption was non-empty.
  bool conditional(Var v) const { return in_d0(v) && conditional_[v]; }
  int d_level(Var v) const { return in_d(v) ? level_of_[v] : -1; }
  // Insertion rank into D; universals rank below every existential.
  std::int64_t d_order(Var v) const { return in_d(v) ? order_[v] : -1; }
  const std::vector<std::vector<Var>>& var_levels() const { return var_levels_; }
  std::vector<Var> d_vars() const;
  bool d_complete() const;

  const std::vector<std::vector<ClauseId>>& clause_levels() const { return clause_levels_; }
  const Clause& clause(ClauseId id) const { return clauses_.at(id - 1).clause; }
  bool has_clause(ClauseId id) const { return id >= 1 && id <= clauses_.size(); }
  bool alive(ClauseId id) const { return has_clause(id) && clauses_[id - 1].alive; }
  int clause_level(ClauseId id) const { return clauses_.at(id - 1).level; }
  bool is_marker(ClauseId id) const { return clauses_.at(id - 1).marker; }
  // Live clauses of level 0, in id order.
  std::vector<ClauseId> level0_clauses() const;
  std::vector<ClauseId> live_clauses() const;

  const std::vector<Lit>& assumption() const { return alpha_; }
  const std::vector<DomainRecord>& domain() const { return domain_; }

  // Unique consequences of v: live clauses with a literal of v whose other
  // variables are all in D. Requires v not in D.
  std::vector<ClauseId> unique_consequences(Var v) const;
  Antecedent antecedent(Lit l);
  // forall D. C|_D & chi & alpha => A_v | A_-v
  bool check_deterministic(Var v);
  // nullopt if C|_D & chi & alpha & A_v & A_-v is UNSAT, else a witness over D.
  std::optional<std::vector<Lit>> check_unconflicted(Var v);

  // chi & C|_{D(0)} is unsatisfiable (unconditional D(0) only).
  bool domain_empty();
  // chi & alpha & C|_{D(0)} & extra is satisfiable.
  bool domain_admits(std::span<const Lit> extra);
  // Matrix satisfiability under assumptions; fills `model` with the values of
  // every formula variable on success.
  bool matrix_satisfiable(std::span<const Lit> assumptions, std::vector<Lit>* model = nullptr);

  bool domain_holds(const Assignment& a) const;
  bool assumption_holds(const Assignment& a) const;

  void set_sat_conflict_budget(std::optional<std::uint64_t> budget);
  std::uint64_t sat_queries() const { return sat_queries_; }

  // Logical state equality (status, stacks, domain, assumption); ignores the
  // SAT caches.
  friend bool operator==(const SolverState& a, const SolverState& b);

  // Debug audit of the calculus invariants by fresh SAT queries and
  // enumeration of X. Intended for |X|+|Y| <= 12. Returns violations.
  std::vector<std::string> audit_invariants() const;

  // --- Raw transitions. No guards; the rules module is the only caller. ---
  void raw_add_to_d(Var v);
  std::vector<ClauseId> raw_push_decision(std::span<const std::vector<Lit>> delta);
  void raw_set_conflict(ConflictData data);
  void raw_set_conflict_clause(std::vector<Lit> clause);
  ClauseId raw_learn();
  void raw_set_status(Status s) { status_ = s; }
  void raw_truncate(int dlvl);
  void raw_add_domain_record(DomainRecord record);
  void raw_assume(Lit l) { alpha_.push_back(l); }
  void raw_close();

 private:
  struct StoredClause {
    Clause clause;
    int level = 0;
    bool alive = true;
    bool marker = false;  // learnt tautological nucleus, never indexed
    int sat_tier = -1;    // tier group holding it, -1 if not loaded
  };
  struct AntecedentCache {
    std::vector<ClauseId> ids;
    sat::GroupId group = 0;
    Lit pos, neg;
    bool valid = false;
  };

  ClauseId store_clause(Clause c, int level, bool marker);
  void index_clause(ClauseId id);
  void rebuild_index();
  void load_into_sat(ClauseId id);
  int var_tier(Var v) const;
  sat::GroupId tier_group(int tier);
  void release_tiers_from(int tier);
  const AntecedentCache& ensure_antecedents(Var v);
  std::vector<Lit> query_assumptions() const;
  sat::Outcome query(std::span<const Lit> assumptions);

  std::shared_ptr<const PrenexFormula> formula_;
  Status status_ = Status::Ready;
  ConflictData conflict_;

  std::vector<StoredClause> clauses_;
  std::vector<std::vector<ClauseId>> clause_levels_;
  std::vector<std::vector<Var>> var_levels_;
  std::vector<int> level_of_;
  std::vector<std::int64_t> order_;
  std::vector<char> conditional_;
  std::int64_t next_order_ = 0;
  std::vector<Lit> alpha_;
  std::vector<DomainRecord> domain_;

  std::vector<std::vector<ClauseId>> occ_;
  std::vector<int> non_d_;

  sat::Context sat_;
  sat::GroupId domain_group_ = 0;
  std::vector<std::optional<sat::GroupId>> tier_groups_;
  std::vector<AntecedentCache> ante_;
  sat::Context matrix_sat_;
  std::uint64_t sat_queries_ = 0;
};

}  // namespace idq
