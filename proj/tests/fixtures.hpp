#pragma once

#include <memory>
#include <string>
#include <vector>

#include "idq/formula.hpp"
#include "idq/trace.hpp"

namespace fx {

using idq::Lit;
using idq::PrenexFormula;
using idq::Var;

inline constexpr Var X1 = 1, X2 = 2, Y1 = 3, Y2 = 4, Y3 = 5, Y4 = 6;

inline Lit P(Var v) { return Lit::pos(v); }
inline Lit N(Var v) { return Lit::neg(v); }

// The ten-clause running example; ids 1..10 in this order.
inline std::shared_ptr<const PrenexFormula> example() {
  return std::make_shared<const PrenexFormula>(PrenexFormula(6, {X1, X2}, {Y1, Y2, Y3, Y4},
                                                             {
                                                                 {P(X1), N(Y1)},
                                                                 {P(X2), N(Y1)},
                                                                 {N(X1), N(X2), P(Y1)},
                                                                 {N(X2), P(Y2)},
                                                                 {N(Y1), P(Y2)},
                                                                 {P(X2), P(Y1), N(Y2)},
                                                                 {P(Y1), N(Y3)},
                                                                 {P(Y2), N(Y3)},
                                                                 {N(Y1), P(Y4)},
                                                                 {N(Y3), N(Y4)},
                                                             }));
}

// forall x exists y. (x | y)(x | -y)
inline std::shared_ptr<const PrenexFormula> forced_false() {
  return std::make_shared<const PrenexFormula>(PrenexFormula(2, {1}, {2}, {{P(1), P(2)}, {P(1), N(2)}}));
}

inline std::shared_ptr<const PrenexFormula> share(PrenexFormula f) {
  return std::make_shared<const PrenexFormula>(std::move(f));
}

// Scripted derivations in trace syntax.
inline const std::string kExampleDerivation =
    "t 2qbf-id-trace 1\n"
    "0 PROPAGATE 3\n"
    "1 PROPAGATE 4\n"
    "2 DECIDE 5 -3 -4 5 0\n"
    "3 PROPAGATE 5\n"
    "4 CONFLICT 6 1 2 3 4 5\n"
    "5 ANALYZE -6 9\n"
    "6 ANALYZE 6 10\n"
    "7 BACKTRACK 1\n"
    "8 LEARN\n"
    "9 PROPAGATE 5\n"
    "10 DECIDE 6 3 -6 0\n"
    "11 PROPAGATE 6\n"
    "12 SAT\n"
    "r TRUE\n";

inline const std::string kLearnBeforeBacktrack =
    "t 2qbf-id-trace 1\n"
    "0 PROPAGATE 3\n"
    "1 PROPAGATE 4\n"
    "2 DECIDE 5 -3 -4 5 0\n"
    "3 PROPAGATE 5\n"
    "4 CONFLICT 6 1 2 3 4 5\n"
    "5 ANALYZE -6 9\n"
    "6 ANALYZE 6 10\n"
    "7 LEARN\n"
    "8 BACKTRACK 1\n"
    "r TRUE\n";

// Conflict prefix of the running example, then a refinement with the response
// (y1, y2, -y3, y4) and the nucleus learnt without backtracking.
inline const std::string kRefinementDerivation =
    "t 2qbf-id-trace 1\n"
    "0 PROPAGATE 3\n"
    "1 PROPAGATE 4\n"
    "2 DECIDE 5 -3 -4 5 0\n"
    "3 PROPAGATE 5\n"
    "4 CONFLICT 6 1 2 3 4 5\n"
    "5 REFINE phi 3 4 -5 6\n"
    "6 LEARN\n"
    "7 DECIDE 6 3 -6 0\n"
    "8 PROPAGATE 6\n"
    "9 SAT\n"
    "r TRUE\n";

// Both cases of x2 closed by expansion, no conflicts.
inline const std::string kExpansionDerivation =
    "t 2qbf-id-trace 1\n"
    "0 ASSUME 2\n"
    "1 PROPAGATE 3\n"
    "2 PROPAGATE 4\n"
    "3 DECIDE 6 6 0\n"
    "4 PROPAGATE 6\n"
    "5 PROPAGATE 5\n"
    "6 CLOSE\n"
    "7 ASSUME -2\n"
    "8 PROPAGATE 3\n"
    "9 PROPAGATE 4\n"
    "10 PROPAGATE 5\n"
    "11 DECIDE 6 6 0\n"
    "12 PROPAGATE 6\n"
    "13 CLOSE\n"
    "14 SAT_EMPTY_DOMAIN\n"
    "r TRUE\n";

inline const std::string kSatUnderAssumption =
    "t 2qbf-id-trace 1\n"
    "0 ASSUME 2\n"
    "1 PROPAGATE 3\n"
    "2 PROPAGATE 4\n"
    "3 DECIDE 6 6 0\n"
    "4 PROPAGATE 6\n"
    "5 PROPAGATE 5\n"
    "6 SAT\n"
    "r TRUE\n";

inline const std::string kForcedFalseDerivation =
    "t 2qbf-id-trace 1\n"
    "0 CONFLICT 2 -1\n"
    "1 ANALYZE -2 1\n"
    "2 ANALYZE 2 2\n"
    "3 UNSAT\n"
    "r FALSE\n";

// Reference truth by enumerating every assignment to X and Y, with no SAT
// solver involved. Only for |X| + |Y| <= 20.
inline bool truth_by_enumeration(const PrenexFormula& f) {
  const auto& xs = f.universals();
  const auto& ys = f.existentials();
  std::vector<int> val(f.max_var() + 1, 0);
  auto holds = [&] {
    for (const auto& c : f.matrix()) {
      bool sat = false;
      for (Lit l : c.literals())
        if ((val[l.var()] == 1) == l.positive()) {
          sat = true;
          break;
        }
      if (!sat) return false;
    }
    return true;
  };
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << xs.size()); ++i) {
    for (std::size_t k = 0; k < xs.size(); ++k) val[xs[k]] = (i >> k) & 1;
    bool found = false;
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << ys.size()) && !found; ++j) {
      for (std::size_t k = 0; k < ys.size(); ++k) val[ys[k]] = (j >> k) & 1;
      found = holds();
    }
    if (!found) return false;
  }
  return true;
}

// State after replaying a scripted prefix; throws if a step is rejected.
inline void replay(idq::SolverState& s, const std::string& text) {
  auto t = idq::trace::parse(text);
  for (const auto& ev : t.events)
    if (auto g = idq::rules::apply(s, ev))
      throw std::runtime_error(std::string("scripted step rejected: ") + g->premise);
}

}  // namespace fx
