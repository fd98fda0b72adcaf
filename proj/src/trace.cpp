#include "idq/trace.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

namespace idq::trace {

namespace {

constexpr std::string_view kHeader = "t 2qbf-id-trace 1";

void put_lits(std::ostringstream& os, std::span<const Lit> lits) {
  for (Lit l : lits) os << ' ' << l.dimacs();
}

struct Tokens {
  std::vector<std::string_view> items;
  std::size_t pos = 0;
  std::size_t line = 0;
  std::size_t event = 0;

  [[noreturn]] void fail(const std::string& what) const { throw FormatError(line, event, what); }
  bool done() const { return pos >= items.size(); }
  std::string_view next() {
    if (done()) fail("missing parameter");
    return items[pos++];
  }
  std::int64_t integer() {
    std::string_view t = next();
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) fail("expected an integer, got '" + std::string(t) + "'");
    return v;
  }
  Var var() {
    std::int64_t v = integer();
    if (v <= 0 || v > INT32_MAX) fail("expected a variable");
    return static_cast<Var>(v);
  }
  Lit lit() {
    std::int64_t v = integer();
    if (v == 0 || v > INT32_MAX || v < -INT32_MAX) fail("expected a literal");
    return Lit(static_cast<std::int32_t>(v));
  }
  std::vector<Lit> rest_lits() {
    std::vector<Lit> out;
    while (!done()) out.push_back(lit());
    return out;
  }
  void end() {
    if (!done()) fail("trailing parameters");
  }
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

rules::RuleApplication parse_event(Tokens& tk) {
  using namespace rules;
  std::string_view name = tk.next();
  auto rule = rule_from_token(name);
  if (!rule) tk.fail("unknown rule '" + std::string(name) + "'");
  switch (*rule) {
    case Rule::Propagate: {
      Var v = tk.var();
      tk.end();
      return Propagate{v};
    }
    case Rule::Decide: {
      Decide d{tk.var(), {}};
      std::vector<Lit> cur;
      bool open = false;
      while (!tk.done()) {
        std::int64_t x = tk.integer();
        if (x == 0) {
          d.delta.push_back(std::move(cur));
          cur.clear();
          open = false;
        } else {
          if (x > INT32_MAX || x < -INT32_MAX) tk.fail("expected a literal");
          cur.push_back(Lit(static_cast<std::int32_t>(x)));
          open = true;
        }
      }
      if (open) tk.fail("unterminated decision clause");
      return d;
    }
    case Rule::Conflict: {
      Var v = tk.var();
      return Conflict{v, tk.rest_lits()};
    }
    case Rule::Analyze: {
      Lit p = tk.lit();
      std::int64_t id = tk.integer();
      if (id <= 0 || id > UINT32_MAX) tk.fail("expected a clause id");
      tk.end();
      return Analyze{p, static_cast<ClauseId>(id)};
    }
    case Rule::Backtrack: {
      std::int64_t lvl = tk.integer();
      if (lvl < INT32_MIN || lvl > INT32_MAX) tk.fail("level out of range");
      tk.end();
      return Backtrack{static_cast<int>(lvl)};
    }
    case Rule::InductiveRefinement: {
      std::string_view kind = tk.next();
      if (kind != "phi" && kind != "c0") tk.fail("refinement kind must be phi or c0");
      return InductiveRefinement{tk.rest_lits(), kind == "c0"};
    }
    case Rule::Assume: {
      Lit l = tk.lit();
      tk.end();
      return Assume{l};
    }
    case Rule::Sat: tk.end(); return Sat{};
    case Rule::Learn: tk.end(); return Learn{};
    case Rule::Unsat: tk.end(); return Unsat{};
    case Rule::Failed: tk.end(); return Failed{};
    case Rule::Close: tk.end(); return Close{};
    case Rule::SatByEmptyDomain: tk.end(); return SatByEmptyDomain{};
  }
  tk.fail("unknown rule");
}

}  // namespace

std::string format_event(std::size_t index, const rules::RuleApplication& app) {
  using namespace rules;
  std::ostringstream os;
  os << index << ' ' << rule_token(rule_of(app));
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Propagate>) {
          os << ' ' << a.v;
        } else if constexpr (std::is_same_v<T, Decide>) {
          os << ' ' << a.v;
          for (const auto& c : a.delta) {
            put_lits(os, c);
            os << " 0";
          }
        } else if constexpr (std::is_same_v<T, Conflict>) {
          os << ' ' << a.v;
          put_lits(os, a.witness);
        } else if constexpr (std::is_same_v<T, Analyze>) {
          os << ' ' << a.pivot.dimacs() << ' ' << a.clause;
        } else if constexpr (std::is_same_v<T, Backtrack>) {
          os << ' ' << a.level;
        } else if constexpr (std::is_same_v<T, InductiveRefinement>) {
          os << ' ' << (a.restricted ? "c0" : "phi");
          put_lits(os, a.response);
        } else if constexpr (std::is_same_v<T, Assume>) {
          os << ' ' << a.lit.dimacs();
        }
      },
      app);
  return os.str();
}

void write(std::ostream& out, const Trace& t) {
  out << kHeader << '\n';
  for (std::size_t i = 0; i < t.events.size(); ++i) out << format_event(i, t.events[i]) << '\n';
  if (t.claimed) out << "r " << to_string(*t.claimed) << '\n';
}

std::string to_text(const Trace& t) {
  std::ostringstream os;
  write(os, t);
  return os.str();
}

Trace parse(std::string_view text) {
  Trace t;
  bool header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    Tokens tk{split(line), 0, line_no, t.events.size()};
    if (tk.items.empty() || tk.items[0] == "c") continue;
    if (!header) {
      if (tk.items.size() != 3 || tk.items[0] != "t" || tk.items[1] != "2qbf-id-trace" || tk.items[2] != "1")
        tk.fail("expected header '" + std::string(kHeader) + "'");
      header = true;
      continue;
    }
    if (t.claimed) tk.fail("content after the result line");
    if (tk.items[0] == "r") {
      tk.pos = 1;
      std::string_view r = tk.next();
      tk.end();
      if (r == "TRUE") t.claimed = Result::True;
      else if (r == "FALSE") t.claimed = Result::False;
      else if (r == "UNKNOWN") t.claimed = Result::Unknown;
      else tk.fail("unknown result '" + std::string(r) + "'");
      continue;
    }
    std::int64_t index = tk.integer();
    if (index < 0 || static_cast<std::size_t>(index) != t.events.size())
      tk.fail("event index " + std::to_string(index) + " out of sequence");
    t.events.push_back(parse_event(tk));
  }
  if (!header) throw FormatError(line_no, 0, "missing header");
  return t;
}

CheckResult check_trace(std::shared_ptr<const PrenexFormula> formula, const Trace& t) {
  SolverState s(std::move(formula));
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    try {
      if (auto g = rules::apply(s, t.events[i]))
        return CheckResult::invalid(i, std::string(rules::rule_token(g->rule)) + ": " + g->premise);
    } catch (const sat::ResourceLimit&) {
      return CheckResult::invalid(i, "SAT budget exhausted while checking");
    }
  }
  if (t.claimed) {
    Status want = *t.claimed == Result::True ? Status::Sat : *t.claimed == Result::False ? Status::Unsat : s.status();
    if (*t.claimed == Result::Unknown && (want == Status::Sat || want == Status::Unsat))
      return CheckResult::invalid(t.events.size(), "claimed UNKNOWN but derivation reached " +
                                                      std::string(to_string(want)));
    if (s.status() != want)
      return CheckResult::invalid(t.events.size(), std::string("claimed ") + to_string(*t.claimed) +
                                                      " but final status is " + to_string(s.status()));
  }
  return CheckResult::ok();
}

CheckResult check_trace_text(std::shared_ptr<const PrenexFormula> formula, std::string_view text) {
  Trace t;
  try {
    t = parse(text);
  } catch (const FormatError& e) {
    return CheckResult::invalid(e.event(), std::string("malformed trace: ") + e.what());
  }
  return check_trace(std::move(formula), t);
}

}  // namespace idq::trace
