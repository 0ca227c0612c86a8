#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qhybrid/problems.hpp"
#include "qhybrid/qubo.hpp"
#include "qhybrid/sample_set.hpp"

namespace qhybrid {

enum class OutputFormat { Table, Csv, Json };

OutputFormat parse_format(const std::string& s);

struct RunConfig {
  std::vector<std::string> instances;
  std::string solver = "qhs";
  nlohmann::json solver_config = nlohmann::json::object();
  std::size_t repetitions = 10;
  std::uint64_t base_seed = 0;
  OutputFormat format = OutputFormat::Table;
  // Per-run wall times in JSON output. Off by default so output only depends
  // on the config.
  bool wall_times = false;
  // Keep VRP demands/capacity from TSPLIB files.
  bool capacity = false;
};

// Keys: instances, solver, solver_config, repetitions, base_seed, format,
// wall_times, capacity. Relative instance paths resolve against `base_dir`.
RunConfig run_config_from_json(const nlohmann::json& doc, const std::string& base_dir = "");
RunConfig load_run_config(const std::string& path);

// Solvers: qbsolv, kerberos, hss, qhs, plus tabu, sa and exact.
const std::vector<std::string>& known_solvers();

struct SolveResult {
  SampleRecord best;
  // Only set by qhs.
  std::optional<double> gap;
  bool proven_optimal = false;
};

// Solver options (all optional):
//   tabu      sweeps, tenure
//   sa        sweeps, reads
//   qbsolv    fraction, rounds, stall_rounds, backend
//   kerberos  iterations, fraction, backend, time_limit_ms
//   hss       iterations, threads, fraction, backend, time_limit_ms
//   qhs       node_limit, time_limit_ms, leaf_size, backend
// backend is "exact", "anneal" or "remote:http://host:port[/prefix]".
// Unknown solver names or option keys raise ConfigError.
SolveResult solve_model(const QuboModel& model, const std::string& solver,
                        const nlohmann::json& options, std::uint64_t seed);

struct RunRecord {
  bool feasible = false;
  std::optional<double> objective;
  double energy = 0.0;
  std::optional<double> gap;
  bool proven_optimal = false;
  std::optional<double> wall_ms;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct RunStats {
  std::string instance;
  std::string solver;
  std::optional<std::string> error;
  std::vector<RunRecord> runs;
  std::size_t feasible_count = 0;
  // Over feasible runs only; absent when none is feasible.
  std::optional<double> avg;
  std::optional<double> stddev;  // population
  std::optional<double> median;
  std::optional<double> best;  // minimum, or maximum for MaxCut
  friend bool operator==(const RunStats&, const RunStats&) = default;
};

// Fills feasible_count and the summary fields from `runs`.
void summarize(RunStats& stats, bool maximize);

// Encodes each instance, solves it `repetitions` times with seeds
// base_seed + r and decodes the best sample. A failing instance yields an
// entry with `error` set and the run continues.
std::vector<RunStats> run_benchmark(const RunConfig& cfg);
RunStats run_instance(const ProblemInstance& inst, const RunConfig& cfg);

// Columns: instance, avg, std, median, best, feasible_count.
std::string emit_table(const std::vector<RunStats>& stats, OutputFormat format);
std::vector<RunStats> stats_from_json(const nlohmann::json& doc);
inline constexpr int kStatsSchemaVersion = 1;

struct MicroInstance {
  std::string file;  // relative to the output directory
  ProblemInstance instance;
  double optimum;
};

// Desk-scale corpus (TSP n <= 5, VRP <= 5 clients, BPP <= 5 items,
// MaxCut <= 12 nodes) with optima from native enumeration.
std::vector<MicroInstance> micro_instances(std::uint64_t seed);
// Writes every instance plus manifest.json into `out_dir`.
std::vector<MicroInstance> gen_micro_instances(std::uint64_t seed, const std::string& out_dir);

}  // namespace qhybrid
