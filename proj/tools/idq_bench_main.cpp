// Runs a config matrix over a directory of QDIMACS files and writes a CSV plus
// one cactus file per config. Exits 3 if two configs disagree on a verdict.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "idq/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"benchmark harness"};
  std::string dir, csv = "results.csv", cactus_prefix;
  std::vector<std::string> only;
  bool static_order = false;
  double timeout = 10;
  unsigned trigger = 32;
  int threads = 0;
  app.add_option("dir", dir, "directory of QDIMACS instances")->required()->check(CLI::ExistingDirectory);
  app.add_option("--csv", csv, "output CSV path");
  app.add_option("--cactus-prefix", cactus_prefix, "write <prefix><config>.cactus files");
  app.add_option("--config", only, "restrict to these config names")->delimiter(',');
  app.add_flag("--static-order", static_order, "static variable order");
  app.add_option("--timeout", timeout, "per-run limit in seconds");
  app.add_option("--expansion-trigger", trigger, "decisions per case before assuming");
  app.add_option("--threads", threads, "worker threads (0: OpenMP default)");
  CLI11_PARSE(app, argc, argv);

  auto configs = idq::bench::standard_configs(
      static_order ? idq::VariableOrder::Static : idq::VariableOrder::Activity, trigger);
  if (!only.empty())
    std::erase_if(configs, [&](const auto& c) { return std::find(only.begin(), only.end(), c.name) == only.end(); });
  if (configs.empty()) {
    std::cerr << "error: no config selected\n";
    return 1;
  }
  for (auto& c : configs) c.config.time_limit_seconds = timeout;

  auto instances = idq::bench::list_instances(dir);
  auto report = idq::bench::run(instances, configs, threads);

  std::ofstream out(csv);
  idq::bench::write_csv(out, report);
  if (!cactus_prefix.empty())
    for (const auto& c : configs) {
      std::string name = c.name;
      std::replace(name.begin(), name.end(), '/', '_');
      std::ofstream cf(cactus_prefix + name + ".cactus");
      idq::bench::write_cactus(cf, report, c.name);
    }
  for (const auto& r : report.rows)
    if (!r.error.empty()) std::cerr << "c " << r.instance << " " << r.config << ": " << r.error << '\n';
  std::cout << "c " << report.rows.size() << " rows written to " << csv << '\n';
  if (!report.disagreements.empty()) {
    std::cerr << "differential bug: verdicts disagree\n";
    for (const auto& d : report.disagreements) {
      std::cerr << "  " << d.instance << ':';
      for (const auto& s : d.detail) std::cerr << ' ' << s;
      std::cerr << '\n';
    }
    return 3;
  }
  return 0;
}
