#pragma once

#include <iosfwd>

namespace idq {

// Solver front end. Reads QDIMACS from the named file or stdin for "-",
// prints one "s TRUE|FALSE|UNKNOWN" line and returns 10, 20 or 0; input and
// usage errors return 1. With --check-trace it prints "s VALID" (0) or
// "s INVALID <index> <reason>" (2).
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace idq
