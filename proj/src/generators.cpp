#include "idq/generators.hpp"

#include <algorithm>
#include <numeric>

namespace idq::gen {

PrenexFormula random_2qbf(std::mt19937_64& rng, const RandomShape& shape) {
  auto uniform = [&](unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(rng); };
  const unsigned nx = uniform(1, shape.max_universals);
  const unsigned ny = uniform(1, shape.max_existentials);
  const unsigned m = uniform(1, shape.max_clauses);
  const Var n = nx + ny;
  std::vector<Var> xs(nx), ys(ny), all(n);
  std::iota(xs.begin(), xs.end(), 1);
  std::iota(ys.begin(), ys.end(), nx + 1);
  std::iota(all.begin(), all.end(), 1);
  std::vector<std::vector<Lit>> clauses;
  for (unsigned i = 0; i < m; ++i) {
    unsigned w = std::min<unsigned>(uniform(shape.min_width, shape.max_width), n);
    std::vector<Var> pick = all;
    std::shuffle(pick.begin(), pick.end(), rng);
    pick.resize(w);
    if (std::none_of(pick.begin(), pick.end(), [&](Var v) { return v > nx; }))
      pick.back() = ys[uniform(0, ny - 1)];
    std::vector<Lit> c;
    for (Var v : pick) c.push_back(Lit::make(v, uniform(0, 1) == 1));
    clauses.push_back(std::move(c));
  }
  return PrenexFormula(n, xs, ys, std::move(clauses));
}

PrenexFormula equality(unsigned n) {
  std::vector<Var> xs(n), ys(n);
  std::iota(xs.begin(), xs.end(), 1);
  std::iota(ys.begin(), ys.end(), n + 1);
  std::vector<std::vector<Lit>> clauses;
  for (Var i = 1; i <= n; ++i) {
    clauses.push_back({Lit::pos(i), Lit::neg(n + i)});
    clauses.push_back({Lit::neg(i), Lit::pos(n + i)});
  }
  return PrenexFormula(2 * n, xs, ys, std::move(clauses));
}

}  // namespace idq::gen
