#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "idq/literal.hpp"

namespace idq {

using ClauseId = std::uint32_t;

enum class ClauseOrigin : std::uint8_t { Original, Learnt, Decision };

// A non-tautological disjunction of literals, sorted by variable, without
// duplicates. The only tautology the solver ever stores is the learnt conflict
// nucleus {v, -v}, which is built through Clause::nucleus().
class Clause {
 public:
  Clause() = default;

  // Sorts and deduplicates. Returns nullopt for tautologies.
  static std::optional<Clause> make(std::vector<Lit> lits, ClauseId id = 0,
                                    ClauseOrigin origin = ClauseOrigin::Original, int level = 0);
  static Clause nucleus(Var v, ClauseId id = 0);

  std::span<const Lit> literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  bool contains(Lit l) const;
  bool mentions(Var v) const;
  bool tautology() const;

  ClauseId id() const { return id_; }
  ClauseOrigin origin() const { return origin_; }
  // Decision level for decision clauses, 0 otherwise.
  int level() const { return level_; }

  void set_id(ClauseId id) { id_ = id; }

  bool satisfied_by(const Assignment& a) const;
  bool falsified_by(const Assignment& a) const;

  // Compares literal content only.
  bool same_literals(const Clause& other) const { return lits_ == other.lits_; }

 private:
  std::vector<Lit> lits_;
  ClauseId id_ = 0;
  ClauseOrigin origin_ = ClauseOrigin::Original;
  int level_ = 0;
};

// Normalizes a literal list in place: sort, dedupe. Returns false if the
// result contains both polarities of some variable.
bool normalize_literals(std::vector<Lit>& lits);

// Resolvent of `a` and `b` on variable `pivot`. Both must mention the pivot in
// opposite polarities. The result is normalized but may be tautological.
std::vector<Lit> resolve(std::span<const Lit> a, std::span<const Lit> b, Var pivot);

enum class Quantifier : std::uint8_t { Free, Universal, Existential };

// Closed 2QBF  forall X. exists Y. matrix  in prenex CNF.
class PrenexFormula {
 public:
  PrenexFormula() = default;
  PrenexFormula(Var max_var, std::vector<Var> universals, std::vector<Var> existentials,
                std::vector<std::vector<Lit>> clauses);

  Var max_var() const { return max_var_; }
  const std::vector<Var>& universals() const { return universals_; }
  const std::vector<Var>& existentials() const { return existentials_; }
  const std::vector<Clause>& matrix() const { return matrix_; }
  Quantifier quantifier(Var v) const { return v < quant_.size() ? quant_[v] : Quantifier::Free; }
  bool is_universal(Var v) const { return quantifier(v) == Quantifier::Universal; }
  bool is_existential(Var v) const { return quantifier(v) == Quantifier::Existential; }

  // Set when some clause has no existential literal: universal reduction turns
  // it into the empty clause.
  bool trivially_false() const { return trivially_false_; }
  std::size_t tautologies_dropped() const { return tautologies_dropped_; }

  friend bool operator==(const PrenexFormula& a, const PrenexFormula& b);

 private:
  Var max_var_ = 0;
  std::vector<Var> universals_;
  std::vector<Var> existentials_;
  std::vector<Clause> matrix_;
  std::vector<Quantifier> quant_;
  bool trivially_false_ = false;
  std::size_t tautologies_dropped_ = 0;
};

enum class ParseErrorKind { MalformedHeader, NonPrenex2QBF, UnboundVariable, DuplicateBinding };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ParseErrorKind kind() const { return kind_; }

 private:
  ParseErrorKind kind_;
};

const char* to_string(ParseErrorKind kind);

PrenexFormula parse_qdimacs(std::string_view text);
PrenexFormula parse_qdimacs(std::istream& in);
std::string to_qdimacs(const PrenexFormula& f);

// Universal reduction in the 2QBF setting: every existential depends on every
// universal, so only clauses with no existential literal reduce, and they
// reduce to the empty clause.
struct TriviallyFalse {};
std::variant<Clause, TriviallyFalse> universal_reduce(const Clause& clause, const PrenexFormula& f);

}  // namespace idq
