#include "idq/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "idq/engine.hpp"
#include "idq/formula.hpp"
#include "idq/oracle.hpp"
#include "idq/trace.hpp"

namespace idq {

namespace {

bool read_all(const std::string& path, std::istream& in, std::string& text, std::ostream& err) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << path << '\n';
      return false;
    }
    buf << file.rdbuf();
  }
  text = buf.str();
  return true;
}

int result_code(Result r) { return r == Result::True ? 10 : r == Result::False ? 20 : 0; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"2QBF solver by incremental determinization"};
  std::string input;
  bool stats = false, static_order = false, footnote = false, use_oracle = false, debug_inv = false;
  std::string cegar = "off", expansion = "off", trace_path, check_path;
  unsigned trigger = 32;
  std::uint64_t seed = 0;
  double timeout = 0;
  std::uint64_t conflict_limit = 0;

  app.add_option("input", input, "QDIMACS file, or - for stdin")->required();
  app.add_flag("--stats", stats, "print counters as 'c <key> <value>' lines");
  app.add_flag("--static-order", static_order, "decide and assume in ascending variable order");
  app.add_option("--cegar", cegar, "inductive refinement on conflicts")
      ->check(CLI::IsMember({"off", "on", "hybrid"}));
  app.add_option("--expansion", expansion, "assume/close case splits over universals")
      ->check(CLI::IsMember({"off", "on"}));
  app.add_option("--expansion-trigger", trigger, "decisions per case before assuming");
  app.add_flag("--refinement-footnote-opt", footnote,
               "refine with the level-0 clauses over decision-independent variables");
  app.add_option("--trace", trace_path, "write the derivation to PATH");
  app.add_option("--check-trace", check_path, "replay-check the derivation in PATH against the input");
  app.add_flag("--oracle", use_oracle, "decide by enumerating universal assignments");
  app.add_option("--seed", seed, "seed for activity tie-breaking");
  app.add_option("--timeout", timeout, "wall-clock limit in seconds");
  app.add_option("--conflict-limit", conflict_limit, "give up after N conflicts");
  app.add_flag("--debug-invariants", debug_inv, "audit invariants after every transition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return 1;
  }

  std::string text;
  if (!read_all(input, in, text, err)) return 1;
  std::shared_ptr<const PrenexFormula> formula;
  try {
    formula = std::make_shared<const PrenexFormula>(parse_qdimacs(text));
  } catch (const ParseError& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  }

  if (!check_path.empty()) {
    std::string trace_text;
    if (!read_all(check_path, in, trace_text, err)) return 1;
    auto r = trace::check_trace_text(formula, trace_text);
    if (r.valid) {
      out << "s VALID\n";
      return 0;
    }
    out << "s INVALID " << r.index << ' ' << r.reason << '\n';
    return 2;
  }

  if (use_oracle) {
    try {
      auto t = oracle::decide_2qbf_bruteforce(*formula);
      Result r = t == oracle::Truth::True ? Result::True : Result::False;
      out << "s " << to_string(r) << '\n';
      return result_code(r);
    } catch (const oracle::BoundExceeded& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    }
  }

  EngineConfig cfg;
  cfg.order = static_order ? VariableOrder::Static : VariableOrder::Activity;
  cfg.cegar = cegar == "on" ? CegarMode::On : cegar == "hybrid" ? CegarMode::Hybrid : CegarMode::Off;
  cfg.expansion = expansion == "on";
  cfg.expansion_trigger = trigger;
  cfg.restricted_refinement = footnote;
  cfg.seed = seed;
  cfg.debug_invariants = debug_inv;
  if (timeout > 0) cfg.time_limit_seconds = timeout;
  if (conflict_limit > 0) cfg.conflict_limit = conflict_limit;

  Engine engine(cfg);
  engine.record_trace(!trace_path.empty());
  Verdict v = engine.solve(formula);

  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    if (!tf) {
      err << "error: cannot write " << trace_path << '\n';
      return 1;
    }
    trace::write(tf, trace::Trace{engine.trace(), v.result});
  }
  for (const auto& msg : v.invariant_violations) err << "c invariant violation: " << msg << '\n';
  if (stats) {
    const Statistics& st = v.stats;
    out << "c decisions " << st.decisions << '\n'
        << "c propagations " << st.propagations << '\n'
        << "c conflicts " << st.conflicts << '\n'
        << "c refinements " << st.refinements << '\n'
        << "c closed_cases " << st.closed_cases << '\n'
        << "c learnt " << st.learnt << '\n'
        << "c backtracks " << st.backtracks << '\n'
        << "c assumptions " << st.assumptions << '\n'
        << "c sat_queries " << st.sat_queries << '\n'
        << "c tautologies_dropped " << formula->tautologies_dropped() << '\n'
        << "c time_ms " << st.elapsed_ms << '\n';
    if (v.result == Result::Unknown) out << "c unknown_reason " << v.reason << '\n';
  }
  out << "s " << to_string(v.result) << '\n';
  return result_code(v.result);
}

}  // namespace idq
