#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "idq/engine.hpp"
#include "idq/generators.hpp"
#include "idq/trace.hpp"

using namespace idq;
using fx::N;
using fx::P;
using fx::X1;
using fx::X2;
using fx::Y1;
using fx::Y2;
using fx::Y3;
using fx::Y4;

namespace {

const std::string kToConflict =
    "t 2qbf-id-trace 1\n"
    "0 PROPAGATE 3\n"
    "1 PROPAGATE 4\n"
    "2 DECIDE 5 -3 -4 5 0\n"
    "3 PROPAGATE 5\n"
    "4 CONFLICT 6 1 2 3 4 5\n";

std::vector<EngineConfig> all_configs(unsigned trigger) {
  std::vector<EngineConfig> out;
  for (auto order : {VariableOrder::Static, VariableOrder::Activity}) {
    EngineConfig id;
    id.order = order;
    EngineConfig cegar = id;
    cegar.cegar = CegarMode::On;
    EngineConfig exp = id;
    exp.expansion = true;
    exp.expansion_trigger = trigger;
    EngineConfig both = exp;
    both.cegar = CegarMode::Hybrid;
    for (const auto& c : {id, cegar, exp, both}) out.push_back(c);
  }
  return out;
}

std::string trace_text(const Engine& e, Result r) { return trace::to_text(trace::Trace{e.trace(), r}); }

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("running example is true in static order") {
    EngineConfig cfg;
    cfg.order = VariableOrder::Static;
    Engine e(cfg);
    auto v = e.solve(fx::example());
    CHECK(v.result == Result::True);
  }

  TEST_CASE("running example is true in every configuration") {
    for (const auto& cfg : all_configs(1)) {
      Engine e(cfg);
      CHECK(e.solve(fx::example()).result == Result::True);
    }
  }

  TEST_CASE("equality of width 16 needs no decisions and no conflicts") {
    Engine e;
    auto v = e.solve(fx::share(gen::equality(16)));
    CHECK(v.result == Result::True);
    CHECK(v.stats.decisions == 0);
    CHECK(v.stats.conflicts == 0);
    CHECK(v.stats.propagations == 16);
  }

  TEST_CASE("forced-false formula is false") {
    for (const auto& cfg : all_configs(32)) {
      Engine e(cfg);
      CHECK(e.solve(fx::forced_false()).result == Result::False);
    }
  }

  TEST_CASE("trivially false formula ends without events") {
    Engine e;
    e.record_trace(true);
    auto v = e.solve(fx::share(parse_qdimacs("p cnf 1 1\na 1 0\ne 0\n1 0")));
    CHECK(v.result == Result::False);
    CHECK(e.trace().empty());
  }

  TEST_CASE("no existentials and a satisfiable matrix") {
    Engine e;
    CHECK(e.solve(fx::share(PrenexFormula(1, {1}, {}, {}))).result == Result::True);
  }

  TEST_CASE("decision without unique consequences is the negative unit") {
    SolverState s(fx::example());
    CHECK(make_decision(s, Y4) == std::vector<std::vector<Lit>>{{N(Y4)}});
  }

  TEST_CASE("decision for y4 after learning keeps y4 unconflicted") {
    SolverState s(fx::example());
    fx::replay(s, kToConflict + "5 ANALYZE -6 9\n6 ANALYZE 6 10\n7 BACKTRACK 1\n8 LEARN\n9 PROPAGATE 5\n");
    auto delta = make_decision(s, Y4);
    CHECK(delta == std::vector<std::vector<Lit>>{{P(Y1), N(Y4)}});
    REQUIRE(!rules::decide(s, Y4, delta));
    CHECK(s.check_deterministic(Y4));
    CHECK(!s.check_unconflicted(Y4));
  }

  TEST_CASE("pure negative literal defines v by its antecedent") {
    // forall x exists y z. (x | -y)(y | z): -y occurs only as a unique
    // consequence, so y is set true unless (x | -y) forces it false.
    auto f = fx::share(PrenexFormula(3, {1}, {2, 3}, {{P(1), N(2)}, {P(2), P(3)}}));
    SolverState s(f);
    CHECK(make_decision(s, 2) == std::vector<std::vector<Lit>>{{N(1), P(2)}});
  }

  TEST_CASE("decision clauses distribute the antecedent cubes") {
    SolverState s(fx::example());
    // A_-y1 = -x1 | -x2 as two cubes; its CNF with y1 is one clause.
    auto pos = decision_clauses(s, Y1, true, 16);
    REQUIRE(pos);
    CHECK(*pos == std::vector<std::vector<Lit>>{{N(X1), N(X2), P(Y1)}});
    // A_y1 = x1 & x2 as one cube gives two clauses with -y1.
    auto neg = decision_clauses(s, Y1, false, 16);
    REQUIRE(neg);
    CHECK(*neg == std::vector<std::vector<Lit>>{{P(X1), N(Y1)}, {P(X2), N(Y1)}});
    CHECK(!decision_clauses(s, Y1, false, 1));
  }

  TEST_CASE("conflict policy learns (-y1 | -y3) and backtracks one level") {
    SolverState s(fx::example());
    fx::replay(s, kToConflict);
    EngineConfig cfg;
    cfg.order = VariableOrder::Static;
    Engine e(cfg);
    e.record_trace(true);
    auto v = e.run(s);
    CHECK(v.result == Result::True);
    REQUIRE(e.trace().size() >= 4);
    CHECK(e.trace()[0] == rules::RuleApplication{rules::Analyze{N(Y4), 9}});
    CHECK(e.trace()[1] == rules::RuleApplication{rules::Analyze{P(Y4), 10}});
    CHECK(e.trace()[2] == rules::RuleApplication{rules::Backtrack{1}});
    CHECK(e.trace()[3] == rules::RuleApplication{rules::Learn{}});
    CHECK(v.stats.conflicts == 0);
  }

  TEST_CASE("cegar on the running example conflict refines once without backtracking") {
    SolverState s(fx::example());
    fx::replay(s, kToConflict);
    EngineConfig cfg;
    cfg.order = VariableOrder::Static;
    cfg.cegar = CegarMode::On;
    Engine e(cfg);
    e.record_trace(true);
    auto v = e.run(s);
    CHECK(v.result == Result::True);
    CHECK(v.stats.refinements == 1);
    CHECK(v.stats.backtracks == 0);
    REQUIRE(e.trace().size() >= 2);
    CHECK(rules::rule_of(e.trace()[0]) == rules::Rule::InductiveRefinement);
    CHECK(e.trace()[1] == rules::RuleApplication{rules::Learn{}});
  }

  TEST_CASE("cegar on the forced-false formula fails without learning") {
    EngineConfig cfg;
    cfg.cegar = CegarMode::On;
    Engine e(cfg);
    e.record_trace(true);
    auto v = e.solve(fx::forced_false());
    CHECK(v.result == Result::False);
    CHECK(v.stats.learnt == 0);
    REQUIRE(!e.trace().empty());
    CHECK(e.trace().back() == rules::RuleApplication{rules::Failed{}});
  }

  TEST_CASE("restricted refinement agrees with the oracle") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 150; ++i) {
      auto f = fx::share(gen::random_2qbf(rng));
      EngineConfig cfg;
      cfg.cegar = CegarMode::Hybrid;
      cfg.restricted_refinement = true;
      Engine e(cfg);
      auto v = e.solve(f);
      REQUIRE(v.result != Result::Unknown);
      CHECK((v.result == Result::True) == fx::truth_by_enumeration(*f));
    }
  }

  TEST_CASE("expansion after a scripted case split finishes without conflicts") {
    SolverState s(fx::example());
    fx::replay(s, "t 2qbf-id-trace 1\n0 ASSUME 2\n");
    EngineConfig cfg;
    cfg.order = VariableOrder::Static;
    Engine e(cfg);
    auto v = e.run(s);
    CHECK(v.result == Result::True);
    CHECK(v.stats.conflicts == 0);
    CHECK(v.stats.closed_cases >= 1);
  }

  TEST_CASE("every configuration agrees with enumeration") {
    std::mt19937_64 rng(1);
    auto configs = all_configs(2);
    for (int i = 0; i < 250; ++i) {
      auto f = fx::share(gen::random_2qbf(rng));
      bool truth = fx::truth_by_enumeration(*f);
      for (std::size_t k = 0; k < configs.size(); ++k) {
        Engine e(configs[k]);
        auto v = e.solve(f);
        CAPTURE(i);
        CAPTURE(k);
        REQUIRE(v.result != Result::Unknown);
        CHECK((v.result == Result::True) == truth);
      }
    }
  }

  TEST_CASE("invariants hold along engine runs") {
    std::mt19937_64 rng(2);
    auto configs = all_configs(2);
    int audited = 0;
    while (audited < 40) {
      auto f = fx::share(gen::random_2qbf(rng, {4, 6, 20, 2, 4}));
      for (auto cfg : configs) {
        cfg.debug_invariants = true;
        Engine e(cfg);
        auto v = e.solve(f);
        CHECK_MESSAGE(v.invariant_violations.empty(),
                      (v.invariant_violations.empty() ? "" : v.invariant_violations.front()));
      }
      ++audited;
    }
  }

  TEST_CASE("static order learns only new clauses") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 80; ++i) {
      auto f = fx::share(gen::random_2qbf(rng, {4, 6, 20, 2, 4}));
      EngineConfig cfg;
      cfg.order = VariableOrder::Static;
      cfg.check_progress = true;
      Engine e(cfg);
      auto v = e.solve(f);
      CHECK_MESSAGE(v.progress_violations.empty(),
                    (v.progress_violations.empty() ? "" : v.progress_violations.front()));
    }
  }

  TEST_CASE("same seed, same trace; traces replay") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 30; ++i) {
      auto f = fx::share(gen::random_2qbf(rng));
      EngineConfig cfg;
      cfg.cegar = CegarMode::Hybrid;
      cfg.expansion = true;
      cfg.expansion_trigger = 2;
      cfg.seed = 1234;
      Engine a(cfg), b(cfg);
      a.record_trace(true);
      b.record_trace(true);
      auto va = a.solve(f);
      auto vb = b.solve(f);
      CHECK(trace_text(a, va.result) == trace_text(b, vb.result));
      auto r = trace::check_trace(f, trace::Trace{a.trace(), va.result});
      CHECK_MESSAGE(r.valid, r.reason);
    }
  }

  TEST_CASE("budgets end the run as unknown") {
    EngineConfig cfg;
    cfg.time_limit_seconds = 0.0;
    Engine e(cfg);
    auto v = e.solve(fx::example());
    CHECK(v.result == Result::Unknown);
    CHECK(v.reason == "time limit");

    EngineConfig c2;
    c2.conflict_limit = 0;
    Engine e2(c2);
    auto v2 = e2.solve(fx::forced_false());
    CHECK(v2.result == Result::Unknown);
    CHECK(v2.reason == "conflict limit");
  }

  TEST_CASE("result names") {
    CHECK(std::string(to_string(Result::True)) == "TRUE");
    CHECK(std::string(to_string(Result::False)) == "FALSE");
    CHECK(std::string(to_string(Result::Unknown)) == "UNKNOWN");
  }
}
