#pragma once

#include <random>

#include "idq/formula.hpp"

namespace idq::gen {

struct RandomShape {
  unsigned max_universals = 6;
  unsigned max_existentials = 8;
  unsigned max_clauses = 30;
  unsigned min_width = 2;
  unsigned max_width = 4;
};

// Random 2QBF: |X| and |Y| uniform in [1, max], clause count uniform in
// [1, max_clauses], distinct variables per clause, at least one existential
// literal per clause. Variables 1..|X| are universal.
PrenexFormula random_2qbf(std::mt19937_64& rng, const RandomShape& shape = {});

// forall x1..xn exists y1..yn. AND_i (x_i | -y_i)(-x_i | y_i), with x_i = i and
// y_i = n + i.
PrenexFormula equality(unsigned n);

}  // namespace idq::gen
