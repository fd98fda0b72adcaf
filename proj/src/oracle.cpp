#include "idq/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "idq/satcore.hpp"

namespace idq::oracle {

namespace {

void check_bound(const PrenexFormula& f, unsigned bound) {
  if (f.universals().size() > bound || f.universals().size() >= 63)
    throw BoundExceeded("formula has " + std::to_string(f.universals().size()) + " universals, bound is " +
                        std::to_string(bound));
}

sat::Context load_matrix(const PrenexFormula& f) {
  sat::Context ctx;
  ctx.reserve_vars(f.max_var());
  for (const Clause& c : f.matrix()) ctx.add_clause(c.literals());
  return ctx;
}

}  // namespace

std::vector<Lit> universal_assignment(const PrenexFormula& f, std::uint64_t i) {
  std::vector<Lit> out;
  out.reserve(f.universals().size());
  for (std::size_t k = 0; k < f.universals().size(); ++k)
    out.push_back(Lit::make(f.universals()[k], ((i >> k) & 1u) != 0));
  return out;
}

Truth decide_2qbf_serial(const PrenexFormula& f, unsigned bound) {
  check_bound(f, bound);
  sat::Context ctx = load_matrix(f);
  const std::uint64_t cases = std::uint64_t{1} << f.universals().size();
  for (std::uint64_t i = 0; i < cases; ++i) {
    auto x = universal_assignment(f, i);
    if (ctx.solve(x) == sat::Outcome::Unsat) return Truth::False;
  }
  return Truth::True;
}

Truth decide_2qbf_parallel(const PrenexFormula& f, unsigned bound, int threads) {
  check_bound(f, bound);
  const std::uint64_t cases = std::uint64_t{1} << f.universals().size();
  if (cases < 64) return decide_2qbf_serial(f, bound);
  std::atomic<bool> refuted{false};
  const auto n = static_cast<std::int64_t>(cases);
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel num_threads(threads)
#endif
  {
    sat::Context ctx = load_matrix(f);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
      if (refuted.load(std::memory_order_relaxed)) continue;
      auto x = universal_assignment(f, static_cast<std::uint64_t>(i));
      if (ctx.solve(x) == sat::Outcome::Unsat) refuted.store(true, std::memory_order_relaxed);
    }
  }
  (void)threads;
  return refuted.load() ? Truth::False : Truth::True;
}

bool clause_set_implies(std::span<const std::vector<Lit>> a, std::span<const std::vector<Lit>> b) {
  sat::Context ctx;
  Var max_var = 0;
  for (const auto& c : a)
    for (Lit l : c) max_var = std::max(max_var, l.var());
  for (const auto& c : b)
    for (Lit l : c) max_var = std::max(max_var, l.var());
  ctx.reserve_vars(max_var);
  for (const auto& c : a) ctx.add_clause(c);
  // not(AND b) = OR_j e_j with e_j -> every literal of clause j false.
  std::vector<Lit> some_false;
  for (const auto& c : b) {
    Lit e = Lit::pos(ctx.new_var());
    for (Lit l : c) ctx.add_clause({~e, ~l});
    some_false.push_back(e);
  }
  ctx.add_clause(some_false);
  return ctx.solve() == sat::Outcome::Unsat;
}

bool clause_set_equivalent(std::span<const std::vector<Lit>> a, std::span<const std::vector<Lit>> b,
                           unsigned bound) {
  std::set<Var> vars;
  for (const auto& c : a)
    for (Lit l : c) vars.insert(l.var());
  for (const auto& c : b)
    for (Lit l : c) vars.insert(l.var());
  if (vars.size() > bound)
    throw BoundExceeded("equivalence check over " + std::to_string(vars.size()) + " variables, bound is " +
                        std::to_string(bound));
  return clause_set_implies(a, b) && clause_set_implies(b, a);
}

}  // namespace idq::oracle
