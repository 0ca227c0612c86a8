#include "qhybrid/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "qhybrid/backend.hpp"
#include "qhybrid/bnb.hpp"
#include "qhybrid/decomposer.hpp"
#include "qhybrid/encoders.hpp"
#include "qhybrid/error.hpp"
#include "qhybrid/heuristics.hpp"
#include "qhybrid/native.hpp"
#include "qhybrid/portfolio.hpp"
#include "qhybrid/rng.hpp"

namespace qhybrid {

using nlohmann::json;

OutputFormat parse_format(const std::string& s) {
  if (s == "table") return OutputFormat::Table;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + s + "'");
}

RunConfig run_config_from_json(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw ConfigError("run config must be a JSON object");
  static const std::set<std::string> keys{"instances",  "solver", "solver_config", "repetitions",
                                          "base_seed",  "format", "wall_times",    "capacity"};
  for (const auto& [k, v] : doc.items()) {
    if (!keys.contains(k)) throw ConfigError("unknown run config key '" + k + "'");
  }
  RunConfig cfg;
  try {
    for (const auto& p : doc.value("instances", json::array())) {
      std::filesystem::path path = p.get<std::string>();
      if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
      cfg.instances.push_back(path.string());
    }
    cfg.solver = doc.value("solver", cfg.solver);
    cfg.solver_config = doc.value("solver_config", json::object());
    const auto reps = doc.value("repetitions", json(10));
    if (!reps.is_number_integer() || reps.get<long long>() < 1) {
      throw ConfigError("repetitions must be a positive integer");
    }
    cfg.repetitions = reps.get<std::size_t>();
    cfg.base_seed = doc.value("base_seed", std::uint64_t{0});
    cfg.format = parse_format(doc.value("format", std::string("table")));
    cfg.wall_times = doc.value("wall_times", false);
    cfg.capacity = doc.value("capacity", false);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed run config: ") + e.what());
  }
  if (!cfg.solver_config.is_object()) throw ConfigError("solver_config must be an object");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open run config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("run config is not valid JSON: " + std::string(e.what()));
  }
  return run_config_from_json(doc, std::filesystem::path(path).parent_path().string());
}

const std::vector<std::string>& known_solvers() {
  static const std::vector<std::string> names{"qbsolv", "kerberos", "hss", "qhs",
                                              "tabu",   "sa",       "exact"};
  return names;
}

namespace {

void check_keys(const json& options, std::initializer_list<const char*> allowed,
                const std::string& solver) {
  for (const auto& [k, v] : options.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      throw ConfigError("option '" + k + "' is not valid for solver " + solver);
    }
  }
}

template <typename T>
T opt(const json& options, const char* key, T fallback) {
  if (!options.contains(key)) return fallback;
  try {
    return options.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("option '") + key + "' has the wrong type");
  }
}

std::optional<std::chrono::milliseconds> time_limit(const json& options) {
  if (!options.contains("time_limit_ms")) return std::nullopt;
  return std::chrono::milliseconds(opt<std::int64_t>(options, "time_limit_ms", 0));
}

void set_fraction(PortfolioConfig& cfg, double fraction) {
  for (BranchSpec& b : cfg.branches) {
    if (b.kind == BranchKind::QuantumDecomposed) b.fraction = fraction;
  }
}

}  // namespace

SolveResult solve_model(const QuboModel& model, const std::string& solver, const json& options,
                        std::uint64_t seed) {
  if (!options.is_object()) throw ConfigError("solver options must be an object");
  const std::size_t n = model.num_variables();
  auto backend = [&](const char* fallback) {
    return make_backend(opt<std::string>(options, "backend", fallback), mix_seed(seed, 7));
  };

  if (solver == "exact") {
    check_keys(options, {}, solver);
    return {exact_solve(model), 0.0, true};
  }
  if (solver == "tabu") {
    check_keys(options, {"sweeps", "tenure"}, solver);
    TabuConfig t;
    t.max_sweeps = opt<std::size_t>(options, "sweeps", t.max_sweeps);
    t.tenure = opt<std::size_t>(options, "tenure", t.tenure);
    t.seed = mix_seed(seed, 1);
    return {tabu_search(model, Rng(seed).random_sample(n), t), std::nullopt};
  }
  if (solver == "sa") {
    check_keys(options, {"sweeps", "reads"}, solver);
    SaConfig s;
    s.sweeps = opt<std::size_t>(options, "sweeps", s.sweeps);
    s.num_reads = opt<std::size_t>(options, "reads", s.num_reads);
    s.seed = seed;
    return {sa_sample(model, s).best(), std::nullopt};
  }
  if (solver == "qbsolv") {
    check_keys(options, {"fraction", "rounds", "stall_rounds", "backend"}, solver);
    DecomposerConfig d;
    d.fraction = opt<double>(options, "fraction", d.fraction);
    d.max_rounds = opt<std::size_t>(options, "rounds", d.max_rounds);
    d.stall_rounds = opt<std::size_t>(options, "stall_rounds", d.stall_rounds);
    d.backend = backend("exact");
    d.seed = seed;
    return {qbsolv_solve(model, d), std::nullopt};
  }
  if (solver == "kerberos") {
    check_keys(options, {"iterations", "fraction", "backend", "time_limit_ms"}, solver);
    PortfolioConfig cfg = kerberos_defaults(backend("exact"), seed);
    cfg.iterations = opt<std::size_t>(options, "iterations", cfg.iterations);
    set_fraction(cfg, opt<double>(options, "fraction", 0.10));
    cfg.time_limit = time_limit(options);
    return {kerberos_solve(model, cfg).best, std::nullopt};
  }
  if (solver == "hss") {
    check_keys(options, {"iterations", "threads", "fraction", "backend", "time_limit_ms"}, solver);
    PortfolioConfig cfg = hss_defaults(backend("exact"), seed);
    cfg.iterations = opt<std::size_t>(options, "iterations", cfg.iterations);
    cfg.threads = opt<std::size_t>(options, "threads", cfg.threads);
    set_fraction(cfg, opt<double>(options, "fraction", 0.10));
    cfg.time_limit = time_limit(options);
    return {hss_solve(model, cfg).best, std::nullopt};
  }
  if (solver == "qhs") {
    check_keys(options, {"node_limit", "time_limit_ms", "leaf_size", "backend"}, solver);
    BnbConfig cfg = qhs_defaults(seed);
    if (options.contains("backend")) {
      for (BranchSpec& b : cfg.primals) {
        if (b.kind == BranchKind::QuantumDecomposed) b.backend = backend("anneal");
      }
    }
    cfg.node_limit = opt<std::size_t>(options, "node_limit", cfg.node_limit);
    cfg.leaf_size = opt<std::size_t>(options, "leaf_size", cfg.leaf_size);
    cfg.time_limit = time_limit(options);
    BnbResult r = branch_and_bound(model, cfg);
    return {r.incumbent, r.gap, r.proven_optimal};
  }
  throw ConfigError("unknown solver '" + solver + "'");
}

void summarize(RunStats& stats, bool maximize) {
  std::vector<double> values;
  for (const RunRecord& r : stats.runs) {
    if (r.feasible && r.objective) values.push_back(*r.objective);
  }
  stats.feasible_count = values.size();
  stats.avg = stats.stddev = stats.median = stats.best = std::nullopt;
  if (values.empty()) return;
  const double count = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / count;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  stats.avg = mean;
  stats.stddev = std::sqrt(sq / count);
  stats.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  stats.best = maximize ? values.back() : values.front();
}

RunStats run_instance(const ProblemInstance& inst, const RunConfig& cfg) {
  RunStats stats;
  stats.instance = name_of(inst);
  stats.solver = cfg.solver;
  const Encoded enc = encode(inst);
  for (std::size_t r = 0; r < cfg.repetitions; ++r) {
    const auto started = std::chrono::steady_clock::now();
    SolveResult res = solve_model(enc.model, cfg.solver, cfg.solver_config, cfg.base_seed + r);
    const std::chrono::duration<double, std::milli> took =
        std::chrono::steady_clock::now() - started;
    const DecodedSolution dec = decode(enc.encoding, res.best.sample(), inst);
    RunRecord rec;
    rec.feasible = dec.feasible;
    rec.objective = dec.objective;
    rec.energy = res.best.energy();
    rec.gap = res.gap;
    rec.proven_optimal = res.proven_optimal;
    if (cfg.wall_times) rec.wall_ms = took.count();
    stats.runs.push_back(rec);
  }
  summarize(stats, enc.encoding.objective_scale() < 0);
  return stats;
}

std::vector<RunStats> run_benchmark(const RunConfig& cfg) {
  if (cfg.repetitions == 0) throw ConfigError("repetitions must be at least 1");
  if (std::find(known_solvers().begin(), known_solvers().end(), cfg.solver) ==
      known_solvers().end()) {
    throw ConfigError("unknown solver '" + cfg.solver + "'");
  }
  std::vector<RunStats> out;
  for (const std::string& path : cfg.instances) {
    try {
      out.push_back(run_instance(load_instance(path, cfg.capacity), cfg));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      RunStats failed;
      failed.instance = std::filesystem::path(path).stem().string();
      failed.solver = cfg.solver;
      failed.error = e.what();
      out.push_back(std::move(failed));
    }
  }
  return out;
}

namespace {

std::string fixed(const std::optional<double>& v, int decimals) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, *v == 0.0 ? 0.0 : *v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

const std::vector<std::string> kColumns{"instance", "avg",  "std",
                                        "median",   "best", "feasible_count"};

std::vector<std::string> row_of(const RunStats& s) {
  return {s.instance,         fixed(s.avg, 1),  fixed(s.stddev, 2),
          fixed(s.median, 1), fixed(s.best, 1), std::to_string(s.feasible_count)};
}

}  // namespace

std::string emit_table(const std::vector<RunStats>& stats, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::Csv: {
      for (std::size_t c = 0; c < kColumns.size(); ++c) out << (c ? "," : "") << kColumns[c];
      out << '\n';
      for (const RunStats& s : stats) {
        const auto row = row_of(s);
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
        out << '\n';
      }
      break;
    }
    case OutputFormat::Table: {
      std::vector<std::vector<std::string>> rows{kColumns};
      for (const RunStats& s : stats) rows.push_back(row_of(s));
      std::vector<std::size_t> width(kColumns.size(), 0);
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
      }
      for (std::size_t r = 0; r < rows.size(); ++r) {
        std::string line;
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
          std::string cell = rows[r][c];
          const std::size_t pad = width[c] - cell.size();
          cell = c == 0 ? cell + std::string(pad, ' ') : std::string(pad, ' ') + cell;
          line += (c ? "  " : "") + cell;
        }
        if (r > 0 && stats[r - 1].error) line += "  error: " + *stats[r - 1].error;
        out << line << '\n';
      }
      break;
    }
    case OutputFormat::Json: {
      json doc{{"schema_version", kStatsSchemaVersion}, {"stats", json::array()}};
      for (const RunStats& s : stats) {
        json runs = json::array();
        for (const RunRecord& r : s.runs) {
          json jr{{"feasible", r.feasible},
                  {"objective", optional_number(r.objective)},
                  {"energy", r.energy},
                  {"gap", optional_number(r.gap)},
                  {"proven_optimal", r.proven_optimal}};
          if (r.wall_ms) jr["wall_ms"] = *r.wall_ms;
          runs.push_back(std::move(jr));
        }
        json js{{"instance", s.instance},
                {"solver", s.solver},
                {"avg", optional_number(s.avg)},
                {"std", optional_number(s.stddev)},
                {"median", optional_number(s.median)},
                {"best", optional_number(s.best)},
                {"feasible_count", s.feasible_count},
                {"runs", std::move(runs)}};
        if (s.error) js["error"] = *s.error;
        doc["stats"].push_back(std::move(js));
      }
      out << doc.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

std::vector<RunStats> stats_from_json(const json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kStatsSchemaVersion) {
      throw FormatError("unsupported stats schema version");
    }
    std::vector<RunStats> out;
    for (const json& js : doc.at("stats")) {
      RunStats s;
      s.instance = js.at("instance").get<std::string>();
      s.solver = js.at("solver").get<std::string>();
      if (js.contains("error")) s.error = js.at("error").get<std::string>();
      for (const json& jr : js.at("runs")) {
        RunRecord r;
        r.feasible = jr.at("feasible").get<bool>();
        r.objective = read_optional(jr, "objective");
        r.energy = jr.at("energy").get<double>();
        r.gap = read_optional(jr, "gap");
        r.proven_optimal = jr.at("proven_optimal").get<bool>();
        r.wall_ms = read_optional(jr, "wall_ms");
        s.runs.push_back(r);
      }
      s.feasible_count = js.at("feasible_count").get<std::size_t>();
      s.avg = read_optional(js, "avg");
      s.stddev = read_optional(js, "std");
      s.median = read_optional(js, "median");
      s.best = read_optional(js, "best");
      out.push_back(std::move(s));
    }
    return out;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed stats JSON: ") + e.what());
  }
}

namespace {

Matrix random_distances(Rng& rng, std::size_t n, std::uint64_t lo, std::uint64_t hi) {
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i][j] = d[j][i] = static_cast<double>(lo + rng.below(hi - lo + 1));
    }
  }
  return d;
}

std::size_t first_fit_decreasing(std::vector<double> weights, double capacity) {
  std::sort(weights.rbegin(), weights.rend());
  std::vector<double> load;
  for (double w : weights) {
    auto it = std::find_if(load.begin(), load.end(), [&](double l) { return l + w <= capacity; });
    if (it == load.end()) {
      load.push_back(w);
    } else {
      *it += w;
    }
  }
  return load.size();
}

std::size_t bpp_variables(const BppInstance& b) {
  std::size_t width = 0;
  while (std::ldexp(1.0, static_cast<int>(width)) < b.capacity + 1.0) ++width;
  return b.max_bins * (1 + b.weights.size() + width);
}

}  // namespace

std::vector<MicroInstance> micro_instances(std::uint64_t seed) {
  std::vector<ProblemInstance> made;
  std::uint64_t stream = 0;

  for (const auto& [name, n] : std::vector<std::pair<std::string, std::size_t>>{
           {"tsp3", 3}, {"tsp4a", 4}, {"tsp4b", 4}, {"tsp5", 5}}) {
    Rng rng(mix_seed(seed, stream++));
    made.push_back(TspInstance{name, random_distances(rng, n, 1, 20)});
  }

  for (const auto& [name, clients, vehicles] :
       std::vector<std::tuple<std::string, std::size_t, std::size_t>>{
           {"vrp2_1", 2, 1}, {"vrp3_1", 3, 1}, {"vrp3_2", 3, 2}, {"vrp4_1", 4, 1}}) {
    Rng rng(mix_seed(seed, stream++));
    VrpInstance v;
    v.name = name;
    v.dist = random_distances(rng, clients + 1, 1, 20);
    v.vehicles = vehicles;
    made.push_back(std::move(v));
  }

  for (const auto& [name, items] :
       std::vector<std::pair<std::string, std::size_t>>{{"bpp3", 3}, {"bpp4", 4}, {"bpp5", 5}}) {
    Rng rng(mix_seed(seed, stream++));
    BppInstance b;
    do {
      b.name = name;
      b.capacity = static_cast<double>(4 + rng.below(4));
      b.weights.clear();
      for (std::size_t i = 0; i < items; ++i) {
        b.weights.push_back(static_cast<double>(1 + rng.below(static_cast<std::uint64_t>(b.capacity))));
      }
      b.max_bins = first_fit_decreasing(b.weights, b.capacity);
    } while (bpp_variables(b) > 24);
    made.push_back(std::move(b));
  }

  made.push_back(McpInstance{"mcp_k3", 3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}}});
  for (std::size_t n : {6, 8, 10, 12}) {
    Rng rng(mix_seed(seed, stream++));
    McpInstance m{"mcp" + std::to_string(n), n, {}};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng.uniform() < 0.5) m.edges.push_back({i, j, static_cast<double>(1 + rng.below(5))});
      }
    }
    made.push_back(std::move(m));
  }

  std::vector<MicroInstance> out;
  for (ProblemInstance& inst : made) {
    validate(inst);
    const double best = native::optimum(inst);
    std::string file = name_of(inst) + ".json";
    out.push_back({std::move(file), std::move(inst), best});
  }
  return out;
}

std::vector<MicroInstance> gen_micro_instances(std::uint64_t seed, const std::string& out_dir) {
  std::vector<MicroInstance> corpus = micro_instances(seed);
  std::filesystem::create_directories(out_dir);
  json manifest{{"seed", seed}, {"instances", json::array()}};
  for (const MicroInstance& m : corpus) {
    save_instance(m.instance, (std::filesystem::path(out_dir) / m.file).string());
    manifest["instances"].push_back({{"file", m.file},
                                     {"name", name_of(m.instance)},
                                     {"kind", to_string(kind_of(m.instance))},
                                     {"optimum", m.optimum}});
  }
  std::ofstream out(std::filesystem::path(out_dir) / "manifest.json");
  if (!out) throw Error("cannot write manifest in " + out_dir);
  out << manifest.dump(2) << '\n';
  return corpus;
}

}  // namespace qhybrid
