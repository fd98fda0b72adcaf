#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idq/engine.hpp"
#include "idq/rules.hpp"

namespace idq::trace {

// Line format:
//   t 2qbf-id-trace 1
//   <index> <RULE> <params...>
//   r TRUE|FALSE|UNKNOWN
// Parameters: PROPAGATE v | DECIDE v (clause lits 0)* | CONFLICT v lits... |
// ANALYZE pivot clause-id | BACKTRACK dlvl | REFINE phi|c0 lits... |
// ASSUME lit | others none.
struct Trace {
  std::vector<rules::RuleApplication> events;
  std::optional<Result> claimed;
};

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, std::size_t event, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line), event_(event) {}
  std::size_t line() const { return line_; }
  // Number of events parsed before the error.
  std::size_t event() const { return event_; }

 private:
  std::size_t line_;
  std::size_t event_;
};

std::string format_event(std::size_t index, const rules::RuleApplication& app);
void write(std::ostream& out, const Trace& t);
std::string to_text(const Trace& t);
Trace parse(std::string_view text);

struct CheckResult {
  bool valid = true;
  std::size_t index = 0;  // failing event, or the event count for a verdict mismatch
  std::string reason;

  static CheckResult ok() { return {}; }
  static CheckResult invalid(std::size_t i, std::string why) { return {false, i, std::move(why)}; }
};

// Replays the events from the initial state through the guarded rules.
CheckResult check_trace(std::shared_ptr<const PrenexFormula> formula, const Trace& t);
// As above on raw text; a malformed line is reported as Invalid at its event
// index.
CheckResult check_trace_text(std::shared_ptr<const PrenexFormula> formula, std::string_view text);

}  // namespace idq::trace
