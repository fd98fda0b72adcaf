#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "idq/engine.hpp"

namespace idq::bench {

struct NamedConfig {
  std::string name;
  EngineConfig config;
};

// ID, ID+CEGAR, ID+E, ID+IR+E in the given variable order.
std::vector<NamedConfig> standard_configs(VariableOrder order, unsigned expansion_trigger = 32);

struct Row {
  std::string instance;
  std::string config;
  std::string verdict;  // TRUE, FALSE, UNKNOWN or ERROR
  double time_ms = 0;
  Statistics stats;
  std::string error;
};

struct Disagreement {
  std::string instance;
  std::vector<std::string> detail;  // "<config>=<verdict>"
};

struct Report {
  std::vector<Row> rows;  // instance-major, config-minor
  std::vector<Disagreement> disagreements;
};

// Instances where one config says TRUE and another FALSE; rows grouped per
// instance as in Report.
std::vector<Disagreement> find_disagreements(const std::vector<Row>& rows, std::size_t configs_per_instance);

// Runs every (instance, config) pair, in parallel when built with OpenMP.
// Each job owns its engine; rows are collected and returned in a fixed order.
Report run(const std::vector<std::filesystem::path>& instances, const std::vector<NamedConfig>& configs,
           int threads = 0);

std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir);

inline constexpr const char* kCsvHeader =
    "instance,config,verdict,time_ms,decisions,conflicts,refinements,closed_cases,learnt";
void write_csv(std::ostream& out, const Report& report);
// Sorted solve times of the config's TRUE/FALSE rows, one per line.
void write_cactus(std::ostream& out, const Report& report, const std::string& config);

}  // namespace idq::bench
