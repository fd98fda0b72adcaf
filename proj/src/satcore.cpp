#include "idq/satcore.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace idq::sat {

namespace {

double luby(double y, int x) {
  int size = 1, seq = 0;
  for (; size < x + 1; ++seq, size = 2 * size + 1) {
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr int kRestartFirst = 100;

}  // namespace

Var Context::new_var(std::optional<GroupId> owner) {
  Var v = static_cast<Var>(assigns_.size());
  assigns_.push_back(Value::Unassigned);
  retired_.push_back(0);
  if (owner && group_live(*owner)) groups_[*owner].owned.push_back(v);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  activity_.push_back(0.0);
  phase_.push_back(false);
  seen_.push_back(0);
  heap_index_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

void Context::reserve_vars(Var n) {
  while (num_vars() < n) new_var();
}

Value Context::model_value(Lit l) const {
  Value v = model_value(l.var());
  if (l.positive() || v == Value::Unassigned) return v;
  return v == Value::True ? Value::False : Value::True;
}

GroupId Context::new_group() {
  groups_.push_back(Group{new_var(), true, true, {}});
  return static_cast<GroupId>(groups_.size() - 1);
}

void Context::release_group(GroupId g) {
  if (!group_live(g)) return;
  groups_[g].live = false;
  for (Var v : groups_[g].owned) retired_[v] = 1;
  groups_[g].owned.clear();
  groups_[g].owned.shrink_to_fit();
  Lit s = Lit::pos(groups_[g].selector);
  add_clause({s});
}

void Context::set_group_enabled(GroupId g, bool enabled) {
  if (g < groups_.size()) groups_[g].enabled = enabled;
}

void Context::add_clause(std::span<const Lit> lits, std::optional<GroupId> group) {
  if (!ok_) return;
  cancel_until(0);
  std::vector<ILit> c;
  c.reserve(lits.size() + 1);
  for (Lit l : lits) {
    reserve_vars(l.var());
    c.push_back(to_ilit(l));
  }
  if (group) {
    if (!group_live(*group)) return;  // retired group: clause is vacuous
    c.push_back(to_ilit(Lit::pos(groups_[*group].selector)));
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  // Drop root-false literals, skip root-satisfied and tautological clauses.
  std::size_t j = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i + 1 < c.size() && var_of(c[i]) == var_of(c[i + 1])) return;
    Value v = value(c[i]);
    if (v == Value::True) return;
    if (v == Value::False) continue;
    c[j++] = c[i];
  }
  c.resize(j);
  ++num_original_;
  if (c.empty()) {
    ok_ = false;
    return;
  }
  if (c.size() == 1) {
    enqueue(c[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return;
  }
  attach(store(std::move(c), false, group ? static_cast<std::int32_t>(*group) : -1));
}

std::uint32_t Context::store(std::vector<ILit> lits, bool learnt, std::int32_t group) {
  ClauseData cd;
  cd.lits = std::move(lits);
  cd.learnt = learnt;
  cd.group = group;
  clauses_.push_back(std::move(cd));
  return static_cast<std::uint32_t>(clauses_.size() - 1);
}

void Context::attach(std::uint32_t cref) {
  const auto& c = clauses_[cref].lits;
  assert(c.size() >= 2);
  watches_[neg(c[0])].push_back({cref, c[1]});
  watches_[neg(c[1])].push_back({cref, c[0]});
}

void Context::enqueue(ILit p, std::uint32_t reason) {
  Var v = var_of(p);
  assigns_[v] = (p & 1) ? Value::False : Value::True;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(p);
}

// Returns the conflicting clause, or kNoReason.
std::uint32_t Context::propagate() {
  std::uint32_t confl = kNoReason;
  while (qhead_ < trail_.size()) {
    ILit p = trail_[qhead_++];
    ILit false_lit = neg(p);
    auto& ws = watches_[p];
    ++stats_.propagations;
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watch w = ws[i];
      ClauseData& cd = clauses_[w.cref];
      if (cd.deleted) {
        ++i;
        continue;
      }
      if (value(w.blocker) == Value::True) {
        ws[j++] = ws[i++];
        continue;
      }
      auto& c = cd.lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      ++i;
      ILit first = c[0];
      Watch nw{w.cref, first};
      if (first != w.blocker && value(first) == Value::True) {
        ws[j++] = nw;
        continue;
      }
      bool found = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != Value::False) {
          std::swap(c[1], c[k]);
          watches_[neg(c[1])].push_back(nw);
          found = true;
          break;
        }
      }
      if (found) continue;
      ws[j++] = nw;
      if (value(first) == Value::False) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
  }
  return confl;
}

bool Context::redundant(ILit p, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  std::size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    Var v = var_of(analyze_stack_.back());
    analyze_stack_.pop_back();
    const auto& c = clauses_[reason_[v]].lits;
    for (std::size_t i = 1; i < c.size(); ++i) {
      Var q = var_of(c[i]);
      if (seen_[q] || level_[q] == 0) continue;
      if (reason_[q] != kNoReason && ((1u << (level_[q] & 31)) & abstract_levels)) {
        seen_[q] = 1;
        analyze_stack_.push_back(c[i]);
        analyze_toclear_.push_back(c[i]);
      } else {
        for (std::size_t k = top; k < analyze_toclear_.size(); ++k) seen_[var_of(analyze_toclear_[k])] = 0;
        analyze_toclear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Context::analyze(std::uint32_t confl, std::vector<ILit>& learnt, int& bt_level) {
  int path = 0;
  ILit p = 0;
  bool have_p = false;
  learnt.clear();
  learnt.push_back(0);
  std::size_t index = trail_.size();
  do {
    ClauseData& cd = clauses_[confl];
    if (cd.learnt) bump_clause(cd);
    for (std::size_t j = have_p ? 1 : 0; j < cd.lits.size(); ++j) {
      ILit q = cd.lits[j];
      Var v = var_of(q);
      if (!seen_[v] && level_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[var_of(trail_[--index])]) {
    }
    p = trail_[index];
    have_p = true;
    confl = reason_[var_of(p)];
    seen_[var_of(p)] = 0;
    --path;
  } while (path > 0);
  learnt[0] = neg(p);

  analyze_toclear_.assign(learnt.begin(), learnt.end());
  std::uint32_t abstract_levels = 0;
  for (std::size_t i = 1; i < learnt.size(); ++i) abstract_levels |= 1u << (level_[var_of(learnt[i])] & 31);
  std::size_t j = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    Var v = var_of(learnt[i]);
    if (reason_[v] == kNoReason || !redundant(learnt[i], abstract_levels)) learnt[j++] = learnt[i];
  }
  learnt.resize(j);

  bt_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    bt_level = level_[var_of(learnt[1])];
  }
  for (ILit l : analyze_toclear_) seen_[var_of(l)] = 0;
}

void Context::cancel_until(int level) {
  if (decision_level() <= level) return;
  for (std::size_t c = trail_.size(); c-- > trail_lim_[level];) {
    Var v = var_of(trail_[c]);
    assigns_[v] = Value::Unassigned;
    reason_[v] = kNoReason;
    phase_[v] = (trail_[c] & 1) == 0;
    heap_insert(v);
  }
  qhead_ = trail_lim_[level];
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
}

std::optional<Context::ILit> Context::pick_branch() {
  while (!heap_.empty()) {
    Var v = heap_pop();
    if (assigns_[v] == Value::Unassigned && !retired_[v]) {
      ++stats_.decisions;
      return phase_[v] ? 2 * v : 2 * v + 1;
    }
  }
  return std::nullopt;
}

void Context::bump_var(Var v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void Context::bump_clause(ClauseData& c) {
  if ((c.activity += clause_inc_) > 1e20) {
    for (auto& cd : clauses_)
      if (cd.learnt) cd.activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void Context::decay() {
  var_inc_ /= kVarDecay;
  clause_inc_ /= kClauseDecay;
}

void Context::reduce_db() {
  std::vector<std::uint32_t> learnts;
  for (std::uint32_t i = 0; i < clauses_.size(); ++i)
    if (clauses_[i].learnt && !clauses_[i].deleted) learnts.push_back(i);
  std::sort(learnts.begin(), learnts.end(), [&](std::uint32_t a, std::uint32_t b) {
    return clauses_[a].activity < clauses_[b].activity;
  });
  auto locked = [&](std::uint32_t cref) {
    ILit first = clauses_[cref].lits[0];
    return value(first) == Value::True && reason_[var_of(first)] == cref;
  };
  for (std::size_t i = 0; i < learnts.size() / 2; ++i) {
    auto& cd = clauses_[learnts[i]];
    if (cd.lits.size() > 2 && !locked(learnts[i])) {
      cd.deleted = true;
      --num_learnt_;
      wasted_ += cd.lits.size();
    }
  }
}

void Context::simplify_root() {
  assert(decision_level() == 0);
  if (trail_.size() == root_simplified_at_) return;
  root_simplified_at_ = trail_.size();
  for (auto& cd : clauses_) {
    if (cd.deleted) continue;
    if (std::any_of(cd.lits.begin(), cd.lits.end(), [&](ILit l) { return value(l) == Value::True; })) {
      cd.deleted = true;
      if (cd.learnt) --num_learnt_;
      wasted_ += cd.lits.size();
    }
  }
  if (wasted_ > 4096 && wasted_ * 2 > clauses_.size()) collect_garbage();
}

void Context::collect_garbage() {
  assert(decision_level() == 0);
  std::vector<ClauseData> kept;
  kept.reserve(clauses_.size());
  for (auto& cd : clauses_)
    if (!cd.deleted) kept.push_back(std::move(cd));
  clauses_ = std::move(kept);
  for (auto& ws : watches_) ws.clear();
  for (std::uint32_t i = 0; i < clauses_.size(); ++i) attach(i);
  for (ILit l : trail_) reason_[var_of(l)] = kNoReason;
  wasted_ = 0;
}

Context::SearchResult Context::search(const std::vector<ILit>& assumptions, std::int64_t conflicts_this_restart,
                                      std::uint64_t start_conflicts) {
  std::vector<ILit> learnt;
  std::int64_t conflicts = 0;
  for (;;) {
    std::uint32_t confl = propagate();
    if (confl != kNoReason) {
      ++stats_.conflicts;
      ++conflicts;
      if (decision_level() == 0) {
        ok_ = false;
        return SearchResult::Unsat;
      }
      if (budget_ && stats_.conflicts - start_conflicts > *budget_) {
        cancel_until(0);
        throw ResourceLimit();
      }
      int bt_level = 0;
      analyze(confl, learnt, bt_level);
      cancel_until(bt_level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        std::uint32_t cref = store(learnt, true, -1);
        attach(cref);
        bump_clause(clauses_[cref]);
        ++num_learnt_;
        enqueue(learnt[0], cref);
      }
      decay();
      continue;
    }
    if (conflicts_this_restart >= 0 && conflicts >= conflicts_this_restart) {
      cancel_until(0);
      ++stats_.restarts;
      return SearchResult::Restart;
    }
    if (decision_level() == 0) simplify_root();
    if (static_cast<double>(num_learnt_) >= max_learnts_ + static_cast<double>(trail_.size())) reduce_db();

    std::optional<ILit> next;
    while (static_cast<std::size_t>(decision_level()) < assumptions.size()) {
      ILit p = assumptions[decision_level()];
      if (value(p) == Value::True) {
        trail_lim_.push_back(trail_.size());
      } else if (value(p) == Value::False) {
        cancel_until(0);
        return SearchResult::Unsat;
      } else {
        next = p;
        break;
      }
    }
    if (!next) {
      next = pick_branch();
      if (!next) {
        model_.assign(assigns_.begin(), assigns_.end());
        cancel_until(0);
        return SearchResult::Sat;
      }
    }
    trail_lim_.push_back(trail_.size());
    enqueue(*next, kNoReason);
  }
}

Outcome Context::solve(std::span<const Lit> assumptions) {
  ++stats_.solves;
  model_.clear();
  if (!ok_) return Outcome::Unsat;
  cancel_until(0);
  std::vector<ILit> assume;
  for (const Group& g : groups_)
    if (g.live && g.enabled) assume.push_back(to_ilit(Lit::neg(g.selector)));
  for (Lit l : assumptions) {
    reserve_vars(l.var());
    assume.push_back(to_ilit(l));
  }
  max_learnts_ = std::max(max_learnts_, static_cast<double>(num_original_) / 3.0);
  std::uint64_t start = stats_.conflicts;
  for (int round = 0;; ++round) {
    auto limit = static_cast<std::int64_t>(luby(2, round) * kRestartFirst);
    SearchResult r = search(assume, limit, start);
    if (r == SearchResult::Unsat) return Outcome::Unsat;
    if (r == SearchResult::Sat) {
      assert(model_satisfies_active_clauses());
      return Outcome::Sat;
    }
    max_learnts_ *= 1.05;
  }
}

bool Context::model_satisfies_active_clauses() const {
  if (model_.empty()) return false;
  auto val = [&](ILit l) {
    Value v = model_[var_of(l)];
    if ((l & 1) && v != Value::Unassigned) v = v == Value::True ? Value::False : Value::True;
    return v;
  };
  for (const auto& cd : clauses_) {
    if (cd.learnt || cd.deleted) continue;
    if (cd.group >= 0 && !(groups_[cd.group].live && groups_[cd.group].enabled)) continue;
    if (std::none_of(cd.lits.begin(), cd.lits.end(), [&](ILit l) { return val(l) == Value::True; })) return false;
  }
  return true;
}

void Context::heap_insert(Var v) {
  if (heap_index_[v] >= 0 || retired_[v]) return;
  heap_index_[v] = static_cast<std::int32_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Context::heap_up(std::size_t i) {
  Var v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_index_[heap_[i]] = static_cast<std::int32_t>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<std::int32_t>(i);
}

void Context::heap_down(std::size_t i) {
  Var v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_index_[heap_[i]] = static_cast<std::int32_t>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<std::int32_t>(i);
}

Var Context::heap_pop() {
  Var top = heap_[0];
  heap_index_[top] = -1;
  Var last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

}  // namespace idq::sat
