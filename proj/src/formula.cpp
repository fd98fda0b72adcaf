#include "idq/formula.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <iterator>
#include <sstream>

namespace idq {

bool normalize_literals(std::vector<Lit>& lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i].var() == lits[i - 1].var()) return false;
  return true;
}

std::optional<Clause> Clause::make(std::vector<Lit> lits, ClauseId id, ClauseOrigin origin, int level) {
  if (!normalize_literals(lits)) return std::nullopt;
  Clause c;
  c.lits_ = std::move(lits);
  c.id_ = id;
  c.origin_ = origin;
  c.level_ = level;
  return c;
}

Clause Clause::nucleus(Var v, ClauseId id) {
  Clause c;
  c.lits_ = {Lit::pos(v), Lit::neg(v)};
  c.id_ = id;
  c.origin_ = ClauseOrigin::Learnt;
  return c;
}

bool Clause::contains(Lit l) const {
  return std::binary_search(lits_.begin(), lits_.end(), l);
}

bool Clause::mentions(Var v) const {
  return contains(Lit::pos(v)) || contains(Lit::neg(v));
}

bool Clause::tautology() const {
  for (std::size_t i = 1; i < lits_.size(); ++i)
    if (lits_[i].var() == lits_[i - 1].var()) return true;
  return false;
}

bool Clause::satisfied_by(const Assignment& a) const {
  return std::any_of(lits_.begin(), lits_.end(), [&](Lit l) { return a.is_true(l); });
}

bool Clause::falsified_by(const Assignment& a) const {
  return std::all_of(lits_.begin(), lits_.end(), [&](Lit l) { return a.is_false(l); });
}

std::vector<Lit> resolve(std::span<const Lit> a, std::span<const Lit> b, Var pivot) {
  std::vector<Lit> out;
  out.reserve(a.size() + b.size());
  // Each side drops exactly one pivot occurrence, the one facing the other
  // side. For the nucleus {v,-v} the surviving pivot literal stays.
  auto take = [&](std::span<const Lit> side, std::span<const Lit> other) {
    bool dropped = false;
    for (Lit l : side) {
      if (!dropped && l.var() == pivot && std::find(other.begin(), other.end(), ~l) != other.end()) {
        dropped = true;
        continue;
      }
      out.push_back(l);
    }
  };
  take(a, b);
  take(b, a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PrenexFormula::PrenexFormula(Var max_var, std::vector<Var> universals, std::vector<Var> existentials,
                             std::vector<std::vector<Lit>> clauses)
    : max_var_(max_var), universals_(std::move(universals)), existentials_(std::move(existentials)) {
  std::sort(universals_.begin(), universals_.end());
  std::sort(existentials_.begin(), existentials_.end());
  quant_.assign(max_var_ + 1, Quantifier::Free);
  for (Var v : universals_) quant_.at(v) = Quantifier::Universal;
  for (Var v : existentials_) quant_.at(v) = Quantifier::Existential;
  ClauseId next = 1;
  for (auto& lits : clauses) {
    auto c = Clause::make(std::move(lits), next, ClauseOrigin::Original, 0);
    if (!c) {
      ++tautologies_dropped_;
      continue;
    }
    ++next;
    if (std::holds_alternative<TriviallyFalse>(universal_reduce(*c, *this))) trivially_false_ = true;
    matrix_.push_back(std::move(*c));
  }
}

bool operator==(const PrenexFormula& a, const PrenexFormula& b) {
  if (a.max_var_ != b.max_var_ || a.universals_ != b.universals_ || a.existentials_ != b.existentials_ ||
      a.trivially_false_ != b.trivially_false_ || a.matrix_.size() != b.matrix_.size())
    return false;
  for (std::size_t i = 0; i < a.matrix_.size(); ++i)
    if (!a.matrix_[i].same_literals(b.matrix_[i]) || a.matrix_[i].id() != b.matrix_[i].id()) return false;
  return true;
}

std::variant<Clause, TriviallyFalse> universal_reduce(const Clause& clause, const PrenexFormula& f) {
  for (Lit l : clause.literals())
    if (f.is_existential(l.var())) return clause;
  return TriviallyFalse{};
}

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MalformedHeader: return "MalformedHeader";
    case ParseErrorKind::NonPrenex2QBF: return "NonPrenex2QBF";
    case ParseErrorKind::UnboundVariable: return "UnboundVariable";
    case ParseErrorKind::DuplicateBinding: return "DuplicateBinding";
  }
  return "?";
}

namespace {

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  // Next whitespace-separated token on the current line; empty at line end.
  std::string_view next_in_line() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }
  bool at_line_end() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
    return pos_ >= text_.size() || text_[pos_] == '\n';
  }
  void skip_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    if (pos_ < text_.size()) ++pos_;
    ++line_;
  }
  void skip_blank() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  std::size_t line() const { return line_ + 1; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

[[noreturn]] void fail(ParseErrorKind kind, std::size_t line, const std::string& msg) {
  throw ParseError(kind, "line " + std::to_string(line) + ": " + msg);
}

std::int64_t to_int(std::string_view tok, std::size_t line) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value > INT32_MAX || value < -INT32_MAX)
    fail(ParseErrorKind::MalformedHeader, line, "expected integer, got '" + std::string(tok) + "'");
  return value;
}

}  // namespace

PrenexFormula parse_qdimacs(std::string_view text) {
  Tokenizer tok(text);
  std::int64_t max_var = -1;
  std::int64_t n_clauses = -1;

  // Header: comments, then `p cnf V C`.
  for (;;) {
    tok.skip_blank();
    if (tok.done()) fail(ParseErrorKind::MalformedHeader, tok.line(), "missing 'p cnf' header");
    if (tok.peek() == 'c') {
      tok.skip_line();
      continue;
    }
    std::size_t line = tok.line();
    if (tok.next_in_line() != "p" || tok.next_in_line() != "cnf")
      fail(ParseErrorKind::MalformedHeader, line, "expected 'p cnf <vars> <clauses>'");
    auto v = tok.next_in_line();
    auto c = tok.next_in_line();
    if (v.empty() || c.empty() || !tok.at_line_end())
      fail(ParseErrorKind::MalformedHeader, line, "expected 'p cnf <vars> <clauses>'");
    max_var = to_int(v, line);
    n_clauses = to_int(c, line);
    if (max_var < 0 || n_clauses < 0) fail(ParseErrorKind::MalformedHeader, line, "negative header count");
    tok.skip_line();
    break;
  }

  std::vector<Quantifier> bound(static_cast<std::size_t>(max_var) + 1, Quantifier::Free);
  std::vector<Var> universals, existentials;
  // 0: nothing yet, 1: inside/after a block, 2: after e block.
  char last_block = 0;
  std::vector<std::vector<Lit>> clauses;
  std::vector<Lit> current;
  bool in_prefix = true;

  for (;;) {
    tok.skip_blank();
    if (tok.done()) break;
    std::size_t line = tok.line();
    char head = tok.peek();
    if (head == 'c') {
      tok.skip_line();
      continue;
    }
    if (head == 'a' || head == 'e') {
      auto q = tok.next_in_line();
      if (q != "a" && q != "e") fail(ParseErrorKind::MalformedHeader, line, "bad token '" + std::string(q) + "'");
      if (!in_prefix || !current.empty())
        fail(ParseErrorKind::NonPrenex2QBF, line, "quantifier block after clauses");
      if (head == 'a' && last_block == 'e')
        fail(ParseErrorKind::NonPrenex2QBF, line, "universal block after existential block");
      last_block = head;
      Quantifier quant = head == 'a' ? Quantifier::Universal : Quantifier::Existential;
      bool terminated = false;
      while (!tok.at_line_end()) {
        auto t = tok.next_in_line();
        std::int64_t v = to_int(t, line);
        if (v == 0) {
          terminated = true;
          if (!tok.at_line_end()) fail(ParseErrorKind::MalformedHeader, line, "tokens after block terminator");
          break;
        }
        if (v < 0 || v > max_var) fail(ParseErrorKind::MalformedHeader, line, "variable out of range in prefix");
        if (bound[v] != Quantifier::Free)
          fail(ParseErrorKind::DuplicateBinding, line, "variable " + std::to_string(v) + " bound twice");
        bound[v] = quant;
        (head == 'a' ? universals : existentials).push_back(static_cast<Var>(v));
      }
      if (!terminated) fail(ParseErrorKind::MalformedHeader, line, "quantifier block not terminated by 0");
      tok.skip_line();
      continue;
    }
    in_prefix = false;
    while (!tok.at_line_end()) {
      auto t = tok.next_in_line();
      std::int64_t v = to_int(t, line);
      if (v == 0) {
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      std::int64_t var = v < 0 ? -v : v;
      if (var > max_var) fail(ParseErrorKind::MalformedHeader, line, "literal exceeds declared variable count");
      if (bound[var] == Quantifier::Free)
        fail(ParseErrorKind::UnboundVariable, line, "variable " + std::to_string(var) + " is not quantified");
      current.push_back(Lit(static_cast<std::int32_t>(v)));
    }
    tok.skip_line();
  }
  if (!current.empty()) fail(ParseErrorKind::MalformedHeader, tok.line(), "last clause not terminated by 0");
  if (static_cast<std::int64_t>(clauses.size()) != n_clauses)
    fail(ParseErrorKind::MalformedHeader, tok.line(),
         "header declares " + std::to_string(n_clauses) + " clauses, body has " + std::to_string(clauses.size()));
  return PrenexFormula(static_cast<Var>(max_var), std::move(universals), std::move(existentials),
                       std::move(clauses));
}

PrenexFormula parse_qdimacs(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_qdimacs(std::string_view(text));
}

std::string to_qdimacs(const PrenexFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.max_var() << ' ' << f.matrix().size() << '\n';
  if (!f.universals().empty()) {
    out << 'a';
    for (Var v : f.universals()) out << ' ' << v;
    out << " 0\n";
  }
  if (!f.existentials().empty()) {
    out << 'e';
    for (Var v : f.existentials()) out << ' ' << v;
    out << " 0\n";
  }
  for (const Clause& c : f.matrix()) {
    for (Lit l : c.literals()) out << l.dimacs() << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace idq
