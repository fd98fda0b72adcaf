// Writes generated instances as QDIMACS: random small 2QBFs or n-bit equality.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "idq/generators.hpp"

int main(int argc, char** argv) {
  CLI::App app{"instance generator"};
  std::string out_dir = ".", family = "random";
  unsigned count = 100, bits = 8;
  std::uint64_t seed = 1;
  idq::gen::RandomShape shape;
  app.add_option("--family", family, "random or equality")->check(CLI::IsMember({"random", "equality"}));
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--count", count, "number of random instances");
  app.add_option("--bits", bits, "equality width");
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--max-universals", shape.max_universals);
  app.add_option("--max-existentials", shape.max_existentials);
  app.add_option("--max-clauses", shape.max_clauses);
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  if (family == "equality") {
    std::ofstream f(std::filesystem::path(out_dir) / ("eq" + std::to_string(bits) + ".qdimacs"));
    f << idq::to_qdimacs(idq::gen::equality(bits));
    return 0;
  }
  std::mt19937_64 rng(seed);
  for (unsigned i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "rand%04u.qdimacs", i);
    std::ofstream f(std::filesystem::path(out_dir) / name);
    f << idq::to_qdimacs(idq::gen::random_2qbf(rng, shape));
  }
  return 0;
}
