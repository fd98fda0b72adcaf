#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "idq/formula.hpp"

namespace idq::oracle {

class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Truth { False, True };

inline constexpr unsigned kDefaultUniversalBound = 16;
inline constexpr unsigned kDefaultEquivalenceBound = 20;

// Ground truth by exhaustive universal expansion: the formula is true iff the
// matrix is satisfiable under every assignment to X, enumerated as ascending
// binary numbers over the sorted universals.
//
// The serial kernel is the reference; the OpenMP kernel splits the 2^|X|
// range into chunks, one SAT context per thread, and combines by conjunction.
Truth decide_2qbf_serial(const PrenexFormula& f, unsigned bound = kDefaultUniversalBound);
Truth decide_2qbf_parallel(const PrenexFormula& f, unsigned bound = kDefaultUniversalBound, int threads = 0);
inline Truth decide_2qbf_bruteforce(const PrenexFormula& f, unsigned bound = kDefaultUniversalBound) {
  return decide_2qbf_parallel(f, bound);
}

// The i-th assignment to the sorted universals of f (bit k of i is the value
// of the k-th universal).
std::vector<Lit> universal_assignment(const PrenexFormula& f, std::uint64_t i);

// a <-> b over all assignments, via two SAT queries with Tseitin negation.
bool clause_set_equivalent(std::span<const std::vector<Lit>> a, std::span<const std::vector<Lit>> b,
                           unsigned bound = kDefaultEquivalenceBound);
// a => b.
bool clause_set_implies(std::span<const std::vector<Lit>> a, std::span<const std::vector<Lit>> b);

}  // namespace idq::oracle
