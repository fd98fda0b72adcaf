#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <span>
#include <vector>

namespace idq {

using Var = std::uint32_t;

// A literal in signed DIMACS form: +v is the variable, -v its negation.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr explicit Lit(std::int32_t dimacs) : value_(dimacs) {}
  static constexpr Lit pos(Var v) { return Lit(static_cast<std::int32_t>(v)); }
  static constexpr Lit neg(Var v) { return Lit(-static_cast<std::int32_t>(v)); }
  static constexpr Lit make(Var v, bool positive) { return positive ? pos(v) : neg(v); }

  constexpr Var var() const { return static_cast<Var>(value_ < 0 ? -value_ : value_); }
  constexpr bool positive() const { return value_ > 0; }
  constexpr std::int32_t dimacs() const { return value_; }
  constexpr Lit operator~() const { return Lit(-value_); }

  // Dense index 2v / 2v+1, used by array-backed structures.
  constexpr std::size_t index() const { return 2 * static_cast<std::size_t>(var()) + (positive() ? 0 : 1); }

  friend constexpr bool operator==(Lit a, Lit b) = default;
  // Ordered by variable first, positive before negative.
  friend constexpr bool operator<(Lit a, Lit b) {
    return a.var() != b.var() ? a.var() < b.var() : (a.positive() && !b.positive());
  }

 private:
  std::int32_t value_ = 0;
};

// Three-valued truth for partial assignments.
enum class Value : std::int8_t { False = -1, Unassigned = 0, True = 1 };

// A partial assignment indexed by variable. Variables beyond the current size
// are unassigned.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::span<const Lit> lits) {
    for (Lit l : lits) set(l);
  }

  void set(Lit l) {
    if (l.var() >= values_.size()) values_.resize(l.var() + 1, Value::Unassigned);
    values_[l.var()] = l.positive() ? Value::True : Value::False;
  }
  void unset(Var v) {
    if (v < values_.size()) values_[v] = Value::Unassigned;
  }
  Value value(Var v) const { return v < values_.size() ? values_[v] : Value::Unassigned; }
  Value value(Lit l) const {
    Value v = value(l.var());
    if (v == Value::Unassigned || l.positive()) return v;
    return v == Value::True ? Value::False : Value::True;
  }
  bool is_true(Lit l) const { return value(l) == Value::True; }
  bool is_false(Lit l) const { return value(l) == Value::False; }
  bool assigned(Var v) const { return value(v) != Value::Unassigned; }

  // Assigned literals in ascending variable order.
  std::vector<Lit> literals() const {
    std::vector<Lit> out;
    for (Var v = 1; v < values_.size(); ++v)
      if (values_[v] != Value::Unassigned) out.push_back(Lit::make(v, values_[v] == Value::True));
    return out;
  }

  friend bool operator==(const Assignment& a, const Assignment& b) { return a.literals() == b.literals(); }

 private:
  std::vector<Value> values_;
};

}  // namespace idq

template <>
struct std::hash<idq::Lit> {
  std::size_t operator()(idq::Lit l) const noexcept { return std::hash<std::int32_t>{}(l.dimacs()); }
};
