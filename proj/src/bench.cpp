#include "idq/bench.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "idq/formula.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace idq::bench {

std::vector<NamedConfig> standard_configs(VariableOrder order, unsigned expansion_trigger) {
  EngineConfig base;
  base.order = order;
  base.expansion_trigger = expansion_trigger;
  std::vector<NamedConfig> out;
  out.push_back({"ID", base});
  EngineConfig c = base;
  c.cegar = CegarMode::On;
  out.push_back({"ID+CEGAR", c});
  c = base;
  c.expansion = true;
  out.push_back({"ID+E", c});
  c = base;
  c.cegar = CegarMode::Hybrid;
  c.expansion = true;
  out.push_back({"ID+IR+E", c});
  if (order == VariableOrder::Static)
    for (auto& nc : out) nc.name += "/static";
  return out;
}

std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file()) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

Row run_one(const std::filesystem::path& file, const NamedConfig& nc) {
  Row row{file.filename().string(), nc.name, "ERROR", 0, {}, {}};
  try {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    auto f = std::make_shared<const PrenexFormula>(parse_qdimacs(in));
    Engine engine(nc.config);
    Verdict v = engine.solve(f);
    row.verdict = to_string(v.result);
    row.time_ms = v.stats.elapsed_ms;
    row.stats = v.stats;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<Disagreement> find_disagreements(const std::vector<Row>& rows, std::size_t configs_per_instance) {
  std::vector<Disagreement> out;
  if (configs_per_instance == 0) return out;
  for (std::size_t i = 0; i + configs_per_instance <= rows.size(); i += configs_per_instance) {
    bool t = false, f = false;
    Disagreement d{rows[i].instance, {}};
    for (std::size_t c = i; c < i + configs_per_instance; ++c) {
      t |= rows[c].verdict == "TRUE";
      f |= rows[c].verdict == "FALSE";
      d.detail.push_back(rows[c].config + "=" + rows[c].verdict);
    }
    if (t && f) out.push_back(std::move(d));
  }
  return out;
}

Report run(const std::vector<std::filesystem::path>& instances, const std::vector<NamedConfig>& configs,
           int threads) {
  Report report;
  const std::int64_t jobs = static_cast<std::int64_t>(instances.size() * configs.size());
  report.rows.resize(jobs);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
  for (std::int64_t j = 0; j < jobs; ++j)
    report.rows[j] = run_one(instances[j / configs.size()], configs[j % configs.size()]);
  (void)threads;

  report.disagreements = find_disagreements(report.rows, configs.size());
  return report;
}

void write_csv(std::ostream& out, const Report& report) {
  out << kCsvHeader << '\n';
  for (const Row& r : report.rows) {
    out << r.instance << ',' << r.config << ',' << r.verdict << ',' << std::fixed << std::setprecision(3)
        << r.time_ms << ',' << r.stats.decisions << ',' << r.stats.conflicts << ',' << r.stats.refinements << ','
        << r.stats.closed_cases << ',' << r.stats.learnt << '\n';
  }
}

void write_cactus(std::ostream& out, const Report& report, const std::string& config) {
  std::vector<double> times;
  for (const Row& r : report.rows)
    if (r.config == config && (r.verdict == "TRUE" || r.verdict == "FALSE")) times.push_back(r.time_ms);
  std::sort(times.begin(), times.end());
  out << std::fixed << std::setprecision(3);
  for (double t : times) out << t << '\n';
}

}  // namespace idq::bench
