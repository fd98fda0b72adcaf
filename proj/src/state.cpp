#include "idq/state.hpp"

#include <algorithm>
#include <cassert>

#include "idq/oracle.hpp"

namespace idq {

const char* to_string(Status s) {
  switch (s) {
    case Status::Ready: return "Ready";
    case Status::Conflict: return "Conflict";
    case Status::Sat: return "SAT";
    case Status::Unsat: return "UNSAT";
  }
  return "?";
}

bool DomainRecord::holds_under(const Assignment& a) const {
  // not(AND excluded): some excluded clause has no true literal.
  return std::any_of(excluded.begin(), excluded.end(), [&](const std::vector<Lit>& c) {
    return std::none_of(c.begin(), c.end(), [&](Lit l) { return a.is_true(l); });
  });
}

void encode_domain_record(sat::Context& ctx, const DomainRecord& record, std::optional<sat::GroupId> group) {
  const auto& ex = record.excluded;
  if (ex.empty()) {
    ctx.add_clause(std::span<const Lit>{}, group);
    return;
  }
  if (std::all_of(ex.begin(), ex.end(), [](const auto& c) { return c.size() == 1; })) {
    std::vector<Lit> neg;
    for (const auto& c : ex) neg.push_back(~c.front());
    ctx.add_clause(neg, group);
    return;
  }
  std::vector<Lit> some;
  for (const auto& c : ex) {
    Lit e = Lit::pos(ctx.new_var(group));
    for (Lit l : c) ctx.add_clause({~e, ~l}, group);
    some.push_back(e);
  }
  ctx.add_clause(some, group);
}

namespace {

// a <-> OR_i AND cube_i, with fresh variables from ctx.
void encode_antecedent(sat::Context& ctx, Lit a, const std::vector<std::vector<Lit>>& cubes,
                       std::optional<sat::GroupId> group) {
  std::vector<Lit> big{~a};
  for (const auto& cube : cubes) {
    Lit t;
    if (cube.empty()) {
      ctx.add_clause({a}, group);
      return;
    }
    if (cube.size() == 1) {
      t = cube.front();
    } else {
      t = Lit::pos(ctx.new_var(group));
      std::vector<Lit> back{t};
      for (Lit c : cube) {
        ctx.add_clause({~t, c}, group);
        back.push_back(~c);
      }
      ctx.add_clause(back, group);
    }
    ctx.add_clause({a, ~t}, group);
    big.push_back(t);
  }
  ctx.add_clause(big, group);
}

std::vector<std::vector<Lit>> cubes_for(const std::vector<const Clause*>& clauses, Lit l) {
  std::vector<std::vector<Lit>> cubes;
  for (const Clause* c : clauses) {
    if (!c->contains(l)) continue;
    std::vector<Lit> cube;
    for (Lit m : c->literals())
      if (m.var() != l.var()) cube.push_back(~m);
    cubes.push_back(std::move(cube));
  }
  return cubes;
}

}  // namespace

SolverState::SolverState(std::shared_ptr<const PrenexFormula> formula) : formula_(std::move(formula)) {
  const Var n = formula_->max_var();
  level_of_.assign(n + 1, -1);
  order_.assign(n + 1, -1);
  conditional_.assign(n + 1, 0);
  occ_.assign(n + 1, {});
  ante_.assign(n + 1, {});
  sat_.reserve_vars(n);
  matrix_sat_.reserve_vars(n);
  domain_group_ = sat_.new_group();

  clause_levels_.emplace_back();
  var_levels_.emplace_back();
  for (Var x : formula_->universals()) {
    level_of_[x] = 0;
    var_levels_[0].push_back(x);
  }
  for (const Clause& c : formula_->matrix()) {
    ClauseId id = store_clause(c, 0, false);
    assert(id == c.id());
    (void)id;
    matrix_sat_.add_clause(c.literals());
  }
  rebuild_index();
  if (formula_->trivially_false()) status_ = Status::Unsat;
}

ClauseId SolverState::store_clause(Clause c, int level, bool marker) {
  ClauseId id = static_cast<ClauseId>(clauses_.size() + 1);
  c.set_id(id);
  clauses_.push_back(StoredClause{std::move(c), level, true, marker, -1});
  clause_levels_.at(level).push_back(id);
  return id;
}

void SolverState::index_clause(ClauseId id) {
  StoredClause& sc = clauses_[id - 1];
  if (!sc.alive || sc.marker) return;
  int count = 0;
  for (Lit l : sc.clause.literals()) {
    occ_[l.var()].push_back(id);
    if (!in_d(l.var())) ++count;
  }
  non_d_[id - 1] = count;
  if (count == 0 && sc.sat_tier < 0) load_into_sat(id);
}

void SolverState::rebuild_index() {
  for (auto& o : occ_) o.clear();
  non_d_.assign(clauses_.size(), 0);
  for (ClauseId id = 1; id <= clauses_.size(); ++id) index_clause(id);
}

int SolverState::var_tier(Var v) const {
  int lvl = level_of_[v];
  if (lvl > 0) return lvl + 1;
  return conditional_[v] ? 1 : 0;
}

void SolverState::load_into_sat(ClauseId id) {
  StoredClause& sc = clauses_[id - 1];
  int tier = sc.level > 0 ? sc.level + 1 : 0;
  for (Lit l : sc.clause.literals()) tier = std::max(tier, var_tier(l.var()));
  sat_.add_clause(sc.clause.literals(), tier_group(tier));
  sc.sat_tier = tier;
}

sat::GroupId SolverState::tier_group(int tier) {
  if (tier_groups_.size() <= static_cast<std::size_t>(tier)) tier_groups_.resize(tier + 1);
  if (!tier_groups_[tier]) tier_groups_[tier] = sat_.new_group();
  return *tier_groups_[tier];
}

void SolverState::release_tiers_from(int tier) {
  for (std::size_t t = tier; t < tier_groups_.size(); ++t) {
    if (tier_groups_[t]) sat_.release_group(*tier_groups_[t]);
    tier_groups_[t].reset();
  }
  for (auto& sc : clauses_)
    if (sc.sat_tier >= tier) sc.sat_tier = -1;
}

std::vector<Var> SolverState::d_vars() const {
  std::vector<Var> out;
  for (Var v = 1; v < level_of_.size(); ++v)
    if (level_of_[v] >= 0) out.push_back(v);
  return out;
}

bool SolverState::d_complete() const {
  std::size_t n = 0;
  for (const auto& lvl : var_levels_) n += lvl.size();
  return n == formula_->universals().size() + formula_->existentials().size();
}

std::vector<ClauseId> SolverState::level0_clauses() const {
  std::vector<ClauseId> out;
  for (ClauseId id : clause_levels_[0])
    if (clauses_[id - 1].alive) out.push_back(id);
  return out;
}

std::vector<ClauseId> SolverState::live_clauses() const {
  std::vector<ClauseId> out;
  for (ClauseId id = 1; id <= clauses_.size(); ++id)
    if (clauses_[id - 1].alive) out.push_back(id);
  return out;
}

std::vector<ClauseId> SolverState::unique_consequences(Var v) const {
  assert(!in_d(v));
  std::vector<ClauseId> out;
  for (ClauseId id : occ_[v])
    if (clauses_[id - 1].alive && non_d_[id - 1] == 1) out.push_back(id);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const SolverState::AntecedentCache& SolverState::ensure_antecedents(Var v) {
  AntecedentCache& ac = ante_[v];
  std::vector<ClauseId> ids = unique_consequences(v);
  if (ac.valid && ac.ids == ids) return ac;
  if (ac.valid) sat_.release_group(ac.group);
  ac.ids = std::move(ids);
  ac.group = sat_.new_group();
  ac.pos = Lit::pos(sat_.new_var(ac.group));
  ac.neg = Lit::pos(sat_.new_var(ac.group));
  std::vector<const Clause*> cs;
  for (ClauseId id : ac.ids) cs.push_back(&clauses_[id - 1].clause);
  encode_antecedent(sat_, ac.pos, cubes_for(cs, Lit::pos(v)), ac.group);
  encode_antecedent(sat_, ac.neg, cubes_for(cs, Lit::neg(v)), ac.group);
  ac.valid = true;
  return ac;
}

Antecedent SolverState::antecedent(Lit l) {
  const AntecedentCache& ac = ensure_antecedents(l.var());
  std::vector<const Clause*> cs;
  for (ClauseId id : ac.ids) cs.push_back(&clauses_[id - 1].clause);
  return Antecedent{l.positive() ? ac.pos : ac.neg, cubes_for(cs, l)};
}

std::vector<Lit> SolverState::query_assumptions() const { return alpha_; }

sat::Outcome SolverState::query(std::span<const Lit> assumptions) {
  ++sat_queries_;
  return sat_.solve(assumptions);
}

bool SolverState::check_deterministic(Var v) {
  const AntecedentCache& ac = ensure_antecedents(v);
  std::vector<Lit> as = query_assumptions();
  as.push_back(~ac.pos);
  as.push_back(~ac.neg);
  return query(as) == sat::Outcome::Unsat;
}

std::optional<std::vector<Lit>> SolverState::check_unconflicted(Var v) {
  const AntecedentCache& ac = ensure_antecedents(v);
  std::vector<Lit> as = query_assumptions();
  as.push_back(ac.pos);
  as.push_back(ac.neg);
  if (query(as) == sat::Outcome::Unsat) return std::nullopt;
  std::vector<Lit> witness;
  for (Var d : d_vars()) witness.push_back(Lit::make(d, sat_.model_value(d) == Value::True));
  return witness;
}

bool SolverState::domain_empty() {
  for (std::size_t t = 1; t < tier_groups_.size(); ++t)
    if (tier_groups_[t]) sat_.set_group_enabled(*tier_groups_[t], false);
  bool empty = query({}) == sat::Outcome::Unsat;
  for (std::size_t t = 1; t < tier_groups_.size(); ++t)
    if (tier_groups_[t]) sat_.set_group_enabled(*tier_groups_[t], true);
  return empty;
}

bool SolverState::domain_admits(std::span<const Lit> extra) {
  for (std::size_t t = 2; t < tier_groups_.size(); ++t)
    if (tier_groups_[t]) sat_.set_group_enabled(*tier_groups_[t], false);
  std::vector<Lit> as = query_assumptions();
  as.insert(as.end(), extra.begin(), extra.end());
  bool ok = query(as) == sat::Outcome::Sat;
  for (std::size_t t = 2; t < tier_groups_.size(); ++t)
    if (tier_groups_[t]) sat_.set_group_enabled(*tier_groups_[t], true);
  return ok;
}

bool SolverState::matrix_satisfiable(std::span<const Lit> assumptions, std::vector<Lit>* model) {
  ++sat_queries_;
  if (matrix_sat_.solve(assumptions) == sat::Outcome::Unsat) return false;
  if (model) {
    model->clear();
    for (Var v = 1; v <= formula_->max_var(); ++v)
      model->push_back(Lit::make(v, matrix_sat_.model_value(v) == Value::True));
  }
  return true;
}

bool SolverState::domain_holds(const Assignment& a) const {
  return std::all_of(domain_.begin(), domain_.end(), [&](const DomainRecord& r) { return r.holds_under(a); });
}

bool SolverState::assumption_holds(const Assignment& a) const {
  return std::all_of(alpha_.begin(), alpha_.end(), [&](Lit l) { return a.is_true(l); });
}

void SolverState::set_sat_conflict_budget(std::optional<std::uint64_t> budget) {
  sat_.set_conflict_budget(budget);
  matrix_sat_.set_conflict_budget(budget);
}

bool operator==(const SolverState& a, const SolverState& b) {
  if (a.status_ != b.status_) return false;
  if (a.status_ == Status::Conflict && !(a.conflict_ == b.conflict_)) return false;
  if (a.clause_levels_ != b.clause_levels_ || a.var_levels_ != b.var_levels_) return false;
  if (a.alpha_ != b.alpha_ || a.domain_ != b.domain_ || a.conditional_ != b.conditional_) return false;
  if (a.clauses_.size() != b.clauses_.size()) return false;
  for (std::size_t i = 0; i < a.clauses_.size(); ++i) {
    const auto& x = a.clauses_[i];
    const auto& y = b.clauses_[i];
    if (x.alive != y.alive || x.level != y.level || x.marker != y.marker || !x.clause.same_literals(y.clause))
      return false;
  }
  return true;
}

void SolverState::raw_add_to_d(Var v) {
  int lvl = height() - 1;
  level_of_[v] = lvl;
  order_[v] = next_order_++;
  conditional_[v] = (lvl == 0 && !alpha_.empty()) ? 1 : 0;
  var_levels_.back().push_back(v);
  for (ClauseId id : occ_[v]) {
    StoredClause& sc = clauses_[id - 1];
    if (!sc.alive) continue;
    if (--non_d_[id - 1] == 0 && sc.sat_tier < 0) load_into_sat(id);
  }
}

std::vector<ClauseId> SolverState::raw_push_decision(std::span<const std::vector<Lit>> delta) {
  int lvl = height();
  clause_levels_.emplace_back();
  var_levels_.emplace_back();
  std::vector<ClauseId> ids;
  for (const auto& lits : delta) {
    auto c = Clause::make(lits, 0, ClauseOrigin::Decision, lvl);
    if (!c) continue;
    ClauseId id = store_clause(std::move(*c), lvl, false);
    non_d_.push_back(0);
    index_clause(id);
    ids.push_back(id);
  }
  return ids;
}

void SolverState::raw_set_conflict(ConflictData data) {
  status_ = Status::Conflict;
  conflict_ = std::move(data);
}

void SolverState::raw_set_conflict_clause(std::vector<Lit> clause) { conflict_.clause = std::move(clause); }

ClauseId SolverState::raw_learn() {
  std::vector<Lit> lits = conflict_.clause;
  ClauseId id;
  if (!normalize_literals(lits)) {
    id = store_clause(Clause::nucleus(lits.front().var()), 0, true);
    non_d_.push_back(0);
  } else {
    id = store_clause(*Clause::make(std::move(lits), 0, ClauseOrigin::Learnt, 0), 0, false);
    non_d_.push_back(0);
    index_clause(id);
  }
  status_ = Status::Ready;
  conflict_ = ConflictData{};
  return id;
}

void SolverState::raw_truncate(int dlvl) {
  for (int lvl = dlvl; lvl < height(); ++lvl) {
    for (ClauseId id : clause_levels_[lvl]) clauses_[id - 1].alive = false;
    for (Var v : var_levels_[lvl]) {
      level_of_[v] = -1;
      order_[v] = -1;
      conditional_[v] = 0;
    }
  }
  clause_levels_.resize(dlvl);
  var_levels_.resize(dlvl);
  release_tiers_from(dlvl + 1);
  rebuild_index();
}

void SolverState::raw_add_domain_record(DomainRecord record) {
  encode_domain_record(sat_, record, domain_group_);
  domain_.push_back(std::move(record));
}

void SolverState::raw_close() {
  DomainRecord rec{DomainRecord::Kind::ClosedCase, {}};
  for (Lit l : alpha_) rec.excluded.push_back({l});
  raw_add_domain_record(std::move(rec));
  for (int lvl = 1; lvl < height(); ++lvl) {
    for (ClauseId id : clause_levels_[lvl]) clauses_[id - 1].alive = false;
    for (Var v : var_levels_[lvl]) {
      level_of_[v] = -1;
      order_[v] = -1;
    }
  }
  clause_levels_.resize(1);
  var_levels_.resize(1);
  auto& d0 = var_levels_[0];
  d0.erase(std::remove_if(d0.begin(), d0.end(),
                          [&](Var v) {
                            if (!conditional_[v]) return false;
                            level_of_[v] = -1;
                            order_[v] = -1;
                            conditional_[v] = 0;
                            return true;
                          }),
           d0.end());
  release_tiers_from(1);
  alpha_.clear();
  rebuild_index();
}

// --- audit ---------------------------------------------------------------

namespace {

struct Fresh {
  sat::Context ctx;
  explicit Fresh(Var n) { ctx.reserve_vars(n); }
};

}  // namespace

std::vector<std::string> SolverState::audit_invariants() const {
  std::vector<std::string> out;
  const PrenexFormula& f = *formula_;
  if (status_ == Status::Sat || status_ == Status::Unsat) return out;

  std::vector<const Clause*> live;
  for (const auto& sc : clauses_)
    if (sc.alive && !sc.marker) live.push_back(&sc.clause);

  auto add_domain = [&](sat::Context& ctx, bool with_alpha) {
    for (const auto& r : domain_) encode_domain_record(ctx, r, std::nullopt);
    if (with_alpha)
      for (Lit l : alpha_) ctx.add_clause({l});
  };
  // Every existential in D stays deterministic and unconflicted, re-checked
  // against the prefix of D inserted before it.
  std::vector<Var> ex_in_d;
  for (Var v = 1; v < level_of_.size(); ++v)
    if (level_of_[v] >= 0 && f.is_existential(v)) ex_in_d.push_back(v);
  std::sort(ex_in_d.begin(), ex_in_d.end(), [&](Var a, Var b) { return order_[a] < order_[b]; });
  for (Var v : ex_in_d) {
    auto in_prefix = [&](Var u) { return level_of_[u] >= 0 && order_[u] < order_[v]; };
    Fresh fr(f.max_var());
    std::vector<const Clause*> uv;
    for (const Clause* c : live) {
      bool rest_in = true;
      bool has_v = false;
      for (Lit l : c->literals()) {
        if (l.var() == v) has_v = true;
        else if (!in_prefix(l.var())) rest_in = false;
      }
      if (!rest_in) continue;
      if (has_v) uv.push_back(c);
      else fr.ctx.add_clause(c->literals());
    }
    add_domain(fr.ctx, true);
    Lit ap = Lit::pos(fr.ctx.new_var());
    Lit an = Lit::pos(fr.ctx.new_var());
    encode_antecedent(fr.ctx, ap, cubes_for(uv, Lit::pos(v)), std::nullopt);
    encode_antecedent(fr.ctx, an, cubes_for(uv, Lit::neg(v)), std::nullopt);
    if (fr.ctx.solve({~ap, ~an}) == sat::Outcome::Sat)
      out.push_back("determinism: variable " + std::to_string(v) + " is not deterministic");
    if (fr.ctx.solve({ap, an}) == sat::Outcome::Sat)
      out.push_back("determinism: variable " + std::to_string(v) + " is conflicted");
  }

  // Level-0 clauses are equivalent to the matrix.
  std::vector<std::vector<Lit>> c0, phi;
  for (ClauseId id : clause_levels_[0]) {
    const auto& sc = clauses_[id - 1];
    if (sc.alive && !sc.marker) c0.emplace_back(sc.clause.literals().begin(), sc.clause.literals().end());
  }
  for (const Clause& c : f.matrix()) phi.emplace_back(c.literals().begin(), c.literals().end());
  if (!oracle::clause_set_equivalent(c0, phi, std::max<unsigned>(oracle::kDefaultEquivalenceBound, f.max_var())))
    out.push_back("level 0: clauses not equivalent to the matrix");

  // The clause under analysis is implied by the matrix.
  if (status_ == Status::Conflict) {
    std::vector<Lit> l = conflict_.clause;
    if (normalize_literals(l)) {
      std::vector<std::vector<Lit>> single{l};
      if (!oracle::clause_set_implies(phi, single)) out.push_back("conflict: clause not implied by the matrix");
    }
  }

  // Every universal assignment outside the domain has a response.
  if (f.universals().size() <= 16) {
    Fresh dom(f.max_var());
    for (const Clause* c : live) {
      if (c->level() != 0 || c->origin() == ClauseOrigin::Decision) continue;
      bool over_d0u = std::all_of(c->literals().begin(), c->literals().end(), [&](Lit l) {
        return level_of_[l.var()] == 0 && !conditional_[l.var()];
      });
      if (over_d0u) dom.ctx.add_clause(c->literals());
    }
    add_domain(dom.ctx, false);
    sat::Context m;
    m.reserve_vars(f.max_var());
    for (const auto& c : phi) m.add_clause(c);
    const std::uint64_t cases = std::uint64_t{1} << f.universals().size();
    for (std::uint64_t i = 0; i < cases; ++i) {
      auto x = oracle::universal_assignment(f, i);
      if (dom.ctx.solve(x) == sat::Outcome::Unsat && m.solve(x) == sat::Outcome::Unsat) {
        out.push_back("domain: excluded universal assignment " + std::to_string(i) + " has no response");
        break;
      }
    }
  }
  return out;
}

}  // namespace idq
