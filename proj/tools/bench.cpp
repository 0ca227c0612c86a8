#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qhybrid/encoders.hpp"
#include "qhybrid/error.hpp"
#include "qhybrid/harness.hpp"
#include "qhybrid/problems.hpp"
#include "qhybrid/qubo_json.hpp"
#include "qhybrid/registry.hpp"

using nlohmann::json;
using namespace qhybrid;

namespace {

struct SolverFlags {
  std::string backend;
  double fraction = 0.0;
  std::size_t rounds = 0, iterations = 0, threads = 0, node_limit = 0, leaf_size = 0;
  double time_limit_s = 0.0;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--backend", f.backend, "exact, anneal or remote:http://host:port");
  cmd->add_option("--fraction", f.fraction, "subproblem size as a fraction of the variables");
  cmd->add_option("--rounds", f.rounds, "qbsolv round limit");
  cmd->add_option("--iterations", f.iterations, "kerberos/hss iterations");
  cmd->add_option("--threads", f.threads, "hss threads");
  cmd->add_option("--node-limit", f.node_limit, "qhs node limit");
  cmd->add_option("--leaf-size", f.leaf_size, "qhs leaf size");
  cmd->add_option("--time-limit", f.time_limit_s, "time limit in seconds");
}

void apply_solver_flags(CLI::App* cmd, const SolverFlags& f, json& options) {
  if (cmd->count("--backend")) options["backend"] = f.backend;
  if (cmd->count("--fraction")) options["fraction"] = f.fraction;
  if (cmd->count("--rounds")) options["rounds"] = f.rounds;
  if (cmd->count("--iterations")) options["iterations"] = f.iterations;
  if (cmd->count("--threads")) options["threads"] = f.threads;
  if (cmd->count("--node-limit")) options["node_limit"] = f.node_limit;
  if (cmd->count("--leaf-size")) options["leaf_size"] = f.leaf_size;
  if (cmd->count("--time-limit")) {
    options["time_limit_ms"] = static_cast<std::int64_t>(f.time_limit_s * 1000.0);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QUBO hybrid workflow benchmark"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "solve instances repeatedly and report statistics");
  std::string config_path, solver, format;
  std::vector<std::string> instances;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  bool strict = false, wall_times = false, capacity = false;
  SolverFlags run_flags;
  run->add_option("--config", config_path, "run config JSON")->check(CLI::ExistingFile);
  run->add_option("--instance", instances, "instance file (repeatable)");
  run->add_option("--solver", solver, "qbsolv, kerberos, hss, qhs, tabu, sa or exact");
  run->add_option("--reps", reps, "repetitions per instance");
  run->add_option("--seed", seed, "base seed");
  run->add_option("--format", format, "table, csv or json");
  run->add_flag("--strict", strict, "exit nonzero if any instance fails");
  run->add_flag("--wall-times", wall_times, "include wall times in JSON output");
  run->add_flag("--capacity", capacity, "keep VRP capacities from TSPLIB files");
  add_solver_flags(run, run_flags);

  auto* gen = app.add_subcommand("gen-micro", "write the micro-instance corpus and manifest");
  std::uint64_t gen_seed = 0;
  std::string out_dir;
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", out_dir, "output directory")->required();

  auto* solve = app.add_subcommand("solve", "solve one QUBO JSON file");
  std::string qubo_path, solve_solver = "qhs";
  std::uint64_t solve_seed = 0;
  SolverFlags solve_flags;
  solve->add_option("qubo", qubo_path, "QUBO JSON file")->required()->check(CLI::ExistingFile);
  solve->add_option("--solver", solve_solver, "solver name");
  solve->add_option("--seed", solve_seed, "seed");
  add_solver_flags(solve, solve_flags);

  auto* enc = app.add_subcommand("encode", "encode an instance as QUBO JSON");
  std::string enc_in, enc_out;
  bool enc_capacity = false;
  enc->add_option("instance", enc_in, "instance file")->required()->check(CLI::ExistingFile);
  enc->add_option("--out", enc_out, "output file (default stdout)");
  enc->add_flag("--capacity", enc_capacity, "keep VRP capacities from TSPLIB files");

  auto* reg = app.add_subcommand("registry", "print the workflow taxonomy");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      RunConfig cfg;
      if (!config_path.empty()) cfg = load_run_config(config_path);
      cfg.instances.insert(cfg.instances.end(), instances.begin(), instances.end());
      if (run->count("--solver")) cfg.solver = solver;
      if (run->count("--reps")) cfg.repetitions = reps;
      if (run->count("--seed")) cfg.base_seed = seed;
      if (run->count("--format")) cfg.format = parse_format(format);
      if (wall_times) cfg.wall_times = true;
      if (capacity) cfg.capacity = true;
      apply_solver_flags(run, run_flags, cfg.solver_config);
      if (cfg.instances.empty()) throw ConfigError("no instances given");

      const auto stats = run_benchmark(cfg);
      std::cout << emit_table(stats, cfg.format);
      bool failed = false;
      for (const RunStats& s : stats) {
        if (s.error) {
          failed = true;
          std::cerr << "bench: " << s.instance << ": " << *s.error << '\n';
        }
      }
      return strict && failed ? 1 : 0;
    }
    if (*gen) {
      const auto corpus = gen_micro_instances(gen_seed, out_dir);
      for (const MicroInstance& m : corpus) {
        std::printf("%-10s optimum %.1f\n", m.file.c_str(), m.optimum);
      }
      return 0;
    }
    if (*solve) {
      json options = json::object();
      apply_solver_flags(solve, solve_flags, options);
      const QuboModel model = load_qubo_file(qubo_path);
      const SolveResult r = solve_model(model, solve_solver, options, solve_seed);
      json out{{"energy", r.best.energy()}, {"sample", r.best.sample()}};
      if (r.gap) {
        out["gap"] = *r.gap;
        out["proven_optimal"] = r.proven_optimal;
      }
      std::cout << out.dump() << '\n';
      return 0;
    }
    if (*enc) {
      const ProblemInstance inst = load_instance(enc_in, enc_capacity);
      const Encoded e = encode(inst);
      if (enc_out.empty()) {
        std::cout << dump_qubo(e.model) << '\n';
      } else {
        save_qubo_file(e.model, enc_out);
      }
      return 0;
    }
    if (*reg) {
      std::printf("%-10s %-34s %-12s %s\n", "solver", "classification", "exploration",
                  "exploitation");
      for (const SolverTag& t : solver_registry()) {
        std::printf("%-10s %-34s %-12s %s\n", t.name.c_str(),
                    std::string(to_string(t.classification)).c_str(),
                    std::string(to_string(t.exploration)).c_str(),
                    std::string(to_string(t.exploitation)).c_str());
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
