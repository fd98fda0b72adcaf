// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fail.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "idq/bench.hpp"
#include "idq/engine.hpp"
#include "idq/generators.hpp"
#include "idq/oracle.hpp"
#include "idq/trace.hpp"

using namespace idq;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

constexpr int kInstances = 1000;
constexpr std::uint64_t kSeed = 20240229;
// Small enough that Assume/Close fire on formulas with at most 8 existentials.
constexpr unsigned kExpansionTrigger = 4;

struct Instance {
  std::shared_ptr<const PrenexFormula> formula;
  bool truth;
};

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what << " (" << detail << ")" << std::endl;
}

std::vector<bench::NamedConfig> eight_configs() {
  auto out = bench::standard_configs(VariableOrder::Static, kExpansionTrigger);
  auto act = bench::standard_configs(VariableOrder::Activity, kExpansionTrigger);
  out.insert(out.end(), act.begin(), act.end());
  return out;
}

// Soundness bookkeeping shared by every run against a known truth value.
struct Soundness {
  std::uint64_t runs = 0, sat_on_false = 0, unsat_on_true = 0;
  void note(Result r, bool truth) {
    ++runs;
    if (r == Result::True && !truth) ++sat_on_false;
    if (r == Result::False && truth) ++unsat_on_true;
  }
};

Soundness soundness;

void criterion1(const std::vector<Instance>& inst) {
  auto configs = eight_configs();
  auto t0 = Clock::now();
  std::uint64_t agree = 0, total = 0, unknown = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (const auto& nc : configs) {
      Engine e(nc.config);
      Verdict v = e.solve(inst[i].formula);
      ++total;
      soundness.note(v.result, inst[i].truth);
      if (v.result == Result::Unknown) ++unknown;
      if ((v.result == Result::True && inst[i].truth) || (v.result == Result::False && !inst[i].truth)) ++agree;
      else if (first_bad.empty()) first_bad = "instance " + std::to_string(i) + " " + nc.name;
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << agree << "/" << total << " runs agree, " << unknown << " unknown, " << secs << " s";
  if (!first_bad.empty()) d << ", first disagreement: " << first_bad;
  report(1, agree == total && secs < 300.0, "8 configs agree with the oracle on 1000 random 2QBFs in < 5 min",
         d.str());
}

void criterion2() {
  std::vector<std::string> bad;
  {
    EngineConfig cfg;
    cfg.order = VariableOrder::Static;
    Engine e(cfg);
    if (e.solve(fx::example()).result != Result::True) bad.push_back("example not TRUE");
  }
  auto expect_valid = [&](const char* name, std::shared_ptr<const PrenexFormula> f, const std::string& text) {
    auto r = trace::check_trace_text(std::move(f), text);
    if (!r.valid) bad.push_back(std::string(name) + " rejected at " + std::to_string(r.index) + ": " + r.reason);
  };
  auto expect_invalid = [&](const char* name, const std::string& text, std::size_t index) {
    auto r = trace::check_trace_text(fx::example(), text);
    if (r.valid || r.index != index)
      bad.push_back(std::string(name) + " not rejected at " + std::to_string(index));
  };
  expect_valid("worked example", fx::example(), fx::kExampleDerivation);
  expect_valid("refinement", fx::example(), fx::kRefinementDerivation);
  expect_valid("expansion", fx::example(), fx::kExpansionDerivation);
  expect_valid("forced false", fx::forced_false(), fx::kForcedFalseDerivation);
  expect_invalid("learn before backtrack", fx::kLearnBeforeBacktrack, 7);
  expect_invalid("sat under assumption", fx::kSatUnderAssumption, 6);
  std::string detail = bad.empty() ? "example TRUE, 4 derivations valid, 2 negative variants rejected" : bad.front();
  report(2, bad.empty(), "running example and scripted derivations", detail);
}

void criterion3() {
  bool ok = true;
  std::ostringstream d;
  for (unsigned n : {8u, 16u, 32u}) {
    Engine e;
    auto t0 = Clock::now();
    Verdict v = e.solve(std::make_shared<const PrenexFormula>(gen::equality(n)));
    double secs = seconds_since(t0);
    bool good = v.result == Result::True && v.stats.decisions == 0 && v.stats.conflicts == 0 && secs < 1.0;
    ok = ok && good;
    d << "n=" << n << ": " << to_string(v.result) << ", " << v.stats.decisions << " decisions, " << v.stats.conflicts
      << " conflicts, " << secs << " s; ";
  }
  report(3, ok, "equality families solve by propagation alone", d.str());
}

void criterion4(const std::vector<Instance>& inst) {
  auto configs = eight_configs();
  std::uint64_t audited = 0, runs = 0, violations = 0;
  std::string first;
  for (const auto& in : inst) {
    if (in.formula->universals().size() + in.formula->existentials().size() > 12) continue;
    ++audited;
    for (auto nc : configs) {
      nc.config.debug_invariants = true;
      Engine e(nc.config);
      Verdict v = e.solve(in.formula);
      ++runs;
      soundness.note(v.result, in.truth);
      violations += v.invariant_violations.size();
      if (first.empty() && !v.invariant_violations.empty()) first = nc.name + ": " + v.invariant_violations.front();
    }
  }
  std::ostringstream d;
  d << audited << " instances, " << runs << " audited runs, " << violations << " violations";
  if (!first.empty()) d << ", first: " << first;
  report(4, audited > 0 && violations == 0, "invariants hold after every transition", d.str());
}

void criterion5() {
  std::ostringstream d;
  d << soundness.runs << " runs, " << soundness.sat_on_false << " TRUE on false, " << soundness.unsat_on_true
    << " FALSE on true";
  report(5, soundness.runs > 0 && soundness.sat_on_false == 0 && soundness.unsat_on_true == 0,
         "no unsound verdict across fuzzing", d.str());
}

void criterion6(const std::vector<Instance>& inst) {
  EngineConfig cfg;
  cfg.order = VariableOrder::Static;
  cfg.check_progress = true;
  std::uint64_t learnt = 0, violations = 0;
  std::string first;
  for (const auto& in : inst) {
    Engine e(cfg);
    Verdict v = e.solve(in.formula);
    soundness.note(v.result, in.truth);
    learnt += v.stats.learnt;
    violations += v.progress_violations.size();
    if (first.empty() && !v.progress_violations.empty()) first = v.progress_violations.front();
  }
  std::ostringstream d;
  d << learnt << " learnt clauses, " << violations << " repeats";
  if (!first.empty()) d << ", first: " << first;
  report(6, violations == 0, "every learnt clause is new in static order", d.str());
}

void criterion7() {
  std::vector<std::string> bad;
  {
    // The running example through the decision on y3, where y4 conflicts.
    SolverState s(fx::example());
    fx::replay(s, "t 2qbf-id-trace 1\n0 PROPAGATE 3\n1 PROPAGATE 4\n2 DECIDE 5 -3 -4 5 0\n3 PROPAGATE 5\n");
    EngineConfig cfg;
    cfg.order = VariableOrder::Static;
    cfg.cegar = CegarMode::On;
    Engine e(cfg);
    Verdict v = e.run(s);
    if (v.result != Result::True) bad.push_back("example not TRUE");
    if (v.stats.refinements != 1) bad.push_back(std::to_string(v.stats.refinements) + " refinements");
    if (v.stats.backtracks != 0) bad.push_back(std::to_string(v.stats.backtracks) + " backtracks");
  }
  {
    EngineConfig cfg;
    cfg.cegar = CegarMode::On;
    Engine e(cfg);
    e.record_trace(true);
    Verdict v = e.solve(fx::forced_false());
    if (v.result != Result::False) bad.push_back("forced-false not FALSE");
    if (e.trace().empty() || rules::rule_of(e.trace().back()) != rules::Rule::Failed) bad.push_back("not via Failed");
    if (v.stats.learnt != 0) bad.push_back(std::to_string(v.stats.learnt) + " learnt");
  }
  report(7, bad.empty(), "refinement behaviour",
         bad.empty() ? "example: 1 refinement, 0 backtracks; forced-false: Failed, 0 learnt" : bad.front());
}

void criterion8() {
  SolverState s(fx::example());
  fx::replay(s, "t 2qbf-id-trace 1\n0 ASSUME 2\n");
  EngineConfig cfg;
  cfg.order = VariableOrder::Static;
  Engine e(cfg);
  e.record_trace(true);
  Verdict v = e.run(s);
  bool closed = false;
  for (const auto& ev : e.trace()) closed = closed || rules::rule_of(ev) == rules::Rule::Close;
  std::ostringstream d;
  d << to_string(v.result) << ", " << v.stats.conflicts << " conflicts, " << v.stats.closed_cases << " closed cases";
  report(8, v.result == Result::True && v.stats.conflicts == 0 && closed,
         "scripted Assume(x2) then Close finishes without conflicts", d.str());
}

void criterion9(const std::vector<Instance>& inst) {
  EngineConfig cfg;
  cfg.order = VariableOrder::Activity;
  cfg.cegar = CegarMode::Hybrid;
  cfg.expansion = true;
  cfg.expansion_trigger = kExpansionTrigger;
  cfg.seed = 42;
  int same = 0;
  for (int i = 0; i < 100; ++i) {
    std::string text[2];
    for (auto& t : text) {
      Engine e(cfg);
      e.record_trace(true);
      Verdict v = e.solve(inst[i].formula);
      t = trace::to_text(trace::Trace{e.trace(), v.result});
    }
    same += text[0] == text[1];
  }
  report(9, same == 100, "identical traces for identical seed and config", std::to_string(same) + "/100 identical");
}

}  // namespace

int main() {
  std::mt19937_64 rng(kSeed);
  std::vector<Instance> inst;
  inst.reserve(kInstances);
  for (int i = 0; i < kInstances; ++i) {
    auto f = std::make_shared<const PrenexFormula>(gen::random_2qbf(rng));
    inst.push_back({f, oracle::decide_2qbf_bruteforce(*f) == oracle::Truth::True});
  }
  criterion1(inst);
  criterion2();
  criterion3();
  criterion4(inst);
  criterion6(inst);
  criterion5();
  criterion7();
  criterion8();
  criterion9(inst);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
