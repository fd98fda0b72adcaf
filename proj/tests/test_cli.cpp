#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "idq/bench.hpp"
#include "idq/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = {}) {
  args.insert(args.begin(), "idq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int code = idq::run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(IDQ_EXAMPLES_DIR) + "/" + name; }

std::filesystem::path scratch(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "idq-cli-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kEquality6 =
    "p cnf 12 12\na 1 2 3 4 5 6 0\ne 7 8 9 10 11 12 0\n"
    "1 -7 0\n-1 7 0\n2 -8 0\n-2 8 0\n3 -9 0\n-3 9 0\n"
    "4 -10 0\n-4 10 0\n5 -11 0\n-5 11 0\n6 -12 0\n-6 12 0\n";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("true formula") {
    auto r = run({data("example.qdimacs")});
    CHECK(r.out == "s TRUE\n");
    CHECK(r.code == 10);
  }

  TEST_CASE("false formula") {
    auto r = run({data("universal_only.qdimacs")});
    CHECK(r.out == "s FALSE\n");
    CHECK(r.code == 20);
    auto r2 = run({"--static-order", "--cegar", "on", data("forced_false.qdimacs")});
    CHECK(r2.out == "s FALSE\n");
    CHECK(r2.code == 20);
  }

  TEST_CASE("unknown on an exhausted budget") {
    auto r = run({"--timeout", "1e-9", data("example.qdimacs")});
    CHECK(r.out == "s UNKNOWN\n");
    CHECK(r.code == 0);
    auto r2 = run({"--conflict-limit", "1", "--stats", data("forced_false.qdimacs")});
    CHECK(r2.code == 20);
  }

  TEST_CASE("oracle from stdin") {
    auto r = run({"--oracle", "-"}, kEquality6);
    CHECK(r.out == "s TRUE\n");
    CHECK(r.code == 10);
  }

  TEST_CASE("oracle over its universal bound is an error") {
    std::string text = "p cnf 34 1\na";
    for (int i = 1; i <= 17; ++i) text += " " + std::to_string(i);
    text += " 0\ne 18 0\n1 18 0\n";
    auto r = run({"--oracle", "-"}, text);
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
  }

  TEST_CASE("stats lines precede the result line") {
    auto r = run({"--stats", "--static-order", data("example.qdimacs")});
    CHECK(r.code == 10);
    std::istringstream lines(r.out);
    std::string line, last;
    std::vector<std::string> keys;
    while (std::getline(lines, line)) {
      if (line.rfind("c ", 0) == 0) keys.push_back(line.substr(2, line.find(' ', 2) - 2));
      last = line;
    }
    CHECK(last == "s TRUE");
    for (const char* k : {"decisions", "propagations", "conflicts", "refinements", "closed_cases", "learnt"})
      CHECK(std::find(keys.begin(), keys.end(), k) != keys.end());
  }

  TEST_CASE("every configuration flag is accepted") {
    auto r = run({"--cegar", "hybrid", "--expansion", "on", "--expansion-trigger", "1", "--refinement-footnote-opt",
                  "--seed", "7", "--debug-invariants", data("example.qdimacs")});
    CHECK(r.code == 10);
    CHECK(r.err.empty());
  }

  TEST_CASE("input errors") {
    CHECK(run({}).code == 1);
    CHECK(run({data("does-not-exist.qdimacs")}).code == 1);
    auto bad = run({"-"}, "p cnf 2 1\ne 1 0\na 2 0\n1 2 0\n");
    CHECK(bad.code == 1);
    CHECK(bad.out.empty());
    CHECK(run({"--cegar", "sometimes", data("example.qdimacs")}).code == 1);
    CHECK(run({"--no-such-flag", data("example.qdimacs")}).code == 1);
  }

  TEST_CASE("help") {
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--check-trace") != std::string::npos);
  }

  TEST_CASE("written traces check as valid") {
    auto path = scratch("example.trace");
    auto r = run({"--trace", path.string(), "--cegar", "hybrid", data("example.qdimacs")});
    CHECK(r.code == 10);
    std::string text = slurp(path);
    CHECK(text.rfind("t 2qbf-id-trace 1\n", 0) == 0);
    CHECK(text.find("r TRUE\n") != std::string::npos);
    auto c = run({"--check-trace", path.string(), data("example.qdimacs")});
    CHECK(c.out == "s VALID\n");
    CHECK(c.code == 0);
  }

  TEST_CASE("invalid traces name the failing event") {
    auto path = scratch("bad.trace");
    {
      std::ofstream out(path);
      out << "t 2qbf-id-trace 1\n0 PROPAGATE 4\nr TRUE\n";
    }
    auto c = run({"--check-trace", path.string(), data("example.qdimacs")});
    CHECK(c.out == "s INVALID 0 PROPAGATE: deterministic\n");
    CHECK(c.code == 2);
  }

  TEST_CASE("unwritable trace path") {
    auto r = run({"--trace", "/nonexistent-dir/x.trace", data("example.qdimacs")});
    CHECK(r.code == 1);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("bench rows, csv and cactus files") {
    namespace fs = std::filesystem;
    std::vector<fs::path> inst{data("eq1.qdimacs"), data("example.qdimacs"), data("forced_false.qdimacs")};
    auto all = idq::bench::standard_configs(idq::VariableOrder::Static);
    std::vector<idq::bench::NamedConfig> two{all[0], all[1]};
    auto report = idq::bench::run(inst, two, 2);
    REQUIRE(report.rows.size() == 6);
    CHECK(report.disagreements.empty());
    CHECK(report.rows[0].instance == "eq1.qdimacs");
    CHECK(report.rows[1].config == two[1].name);
    CHECK(report.rows[4].verdict == "FALSE");
    std::ostringstream csv;
    idq::bench::write_csv(csv, report);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == idq::bench::kCsvHeader);
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 6);
    std::ostringstream cactus;
    idq::bench::write_cactus(cactus, report, two[0].name);
    std::string times = cactus.str();
    CHECK(std::count(times.begin(), times.end(), '\n') == 3);
  }

  TEST_CASE("bench flags conflicting verdicts") {
    using idq::bench::Row;
    std::vector<Row> rows{{"a", "ID", "TRUE"}, {"a", "ID+CEGAR", "TRUE"}, {"b", "ID", "TRUE"},
                          {"b", "ID+CEGAR", "FALSE"}, {"c", "ID", "UNKNOWN"}, {"c", "ID+CEGAR", "FALSE"}};
    auto d = idq::bench::find_disagreements(rows, 2);
    REQUIRE(d.size() == 1);
    CHECK(d[0].instance == "b");
    CHECK(d[0].detail == std::vector<std::string>{"ID=TRUE", "ID+CEGAR=FALSE"});
  }

  TEST_CASE("bench records unreadable instances as errors") {
    auto report = idq::bench::run({data("missing.qdimacs")}, idq::bench::standard_configs(idq::VariableOrder::Static));
    REQUIRE(report.rows.size() == 4);
    for (const auto& r : report.rows) CHECK(r.verdict == "ERROR");
  }
}
