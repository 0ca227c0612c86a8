// Acceptance checks AC1..AC8. One PASS/FAIL/SKIP line per criterion; exit code
// 1 if anything failed.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "qhybrid/backend.hpp"
#include "qhybrid/bnb.hpp"
#include "qhybrid/decomposer.hpp"
#include "qhybrid/encoders.hpp"
#include "qhybrid/error.hpp"
#include "qhybrid/harness.hpp"
#include "qhybrid/heuristics.hpp"
#include "qhybrid/registry.hpp"
#include "qhybrid/rng.hpp"
#include "support.hpp"

using namespace qhybrid;
using qhybrid::test::corpus;
using qhybrid::test::dense_energy;
using qhybrid::test::mask_to_sample;
using qhybrid::test::near;
using qhybrid::test::truth_table_min;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome ac1() {
  const auto t0 = Clock::now();
  const auto models = corpus(1001, 500, 1, 16);
  std::size_t agree = 0;
  for (const QuboModel& m : models) {
    const SampleRecord r = exact_solve(m);
    const double truth = truth_table_min(m);
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < r.sample().size(); ++i) mask |= std::uint64_t{r.sample()[i]} << i;
    if (near(r.energy(), truth) && near(dense_energy(m, mask), truth)) ++agree;
  }
  const double secs = seconds_since(t0);
  const bool ok = agree == models.size() && secs < 60.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("%zu/%zu models match, %.1fs (limit 60s)", agree, models.size(), secs)};
}

Outcome ac2() {
  const auto t0 = Clock::now();
  const auto models = corpus(1002, 200, 2, 12);
  std::size_t tabu_hits = 0, sa_hits = 0;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const QuboModel& m = models[k];
    const double truth = truth_table_min(m);
    TabuConfig t;
    t.max_sweeps = 500;
    t.seed = mix_seed(k, 1);
    if (near(tabu_search(m, Rng(k).random_sample(m.num_variables()), t).energy(), truth)) ++tabu_hits;
    SaConfig s;
    s.sweeps = 1000;
    s.num_reads = 10;
    s.seed = mix_seed(k, 2);
    if (near(sa_sample(m, s).best().energy(), truth)) ++sa_hits;
  }
  const double secs = seconds_since(t0);
  const double need = 0.95 * static_cast<double>(models.size());
  const bool ok = tabu_hits >= need && sa_hits >= need && secs < 120.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("tabu %zu/%zu, sa %zu/%zu optimal (need 95%%), %.1fs (limit 120s)", tabu_hits,
              models.size(), sa_hits, models.size(), secs)};
}

Outcome ac3() {
  std::mt19937_64 gen(1003);
  std::size_t identity_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 11;
    const QuboModel m = test::random_model(gen, n, 0.5);
    const Sample x = Rng(gen()).random_sample(n);
    std::vector<VarIndex> subset;
    for (VarIndex i = 0; i < n; ++i)
      if (gen() % 2) subset.push_back(i);
    if (subset.empty()) subset.push_back(gen() % n);
    const ClampedModel c = clamp(m, x, subset);
    bool all = true;
    for (std::uint64_t mask = 0; mask < (1ULL << c.to_full.size()); ++mask) {
      const Sample sub = mask_to_sample(mask, c.to_full.size());
      const double whole = energy(m, c.expand(x, sub));
      if (std::abs(energy(c.model, sub) - whole) > 1e-9 * std::max(1.0, std::abs(whole))) all = false;
    }
    if (all) ++identity_ok;
  }

  const auto models = corpus(1004, 200, 1, 20);
  std::size_t equal = 0;
  for (std::size_t k = 0; k < models.size(); ++k) {
    DecomposerConfig d;
    d.fraction = 1.0;
    d.seed = k;
    if (near(qbsolv_solve(models[k], d).energy(), exact_solve(models[k]).energy())) ++equal;
  }
  const bool ok = identity_ok == 100 && equal == models.size();
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("clamp identity %zu/100, qbsolv(fraction=1) == exact %zu/%zu", identity_ok, equal,
              models.size())};
}

Outcome ac4() {
  const auto models = corpus(1005, 200, 1, 20);
  std::size_t proven = 0;
  for (std::size_t k = 0; k < models.size(); ++k) {
    BnbConfig cfg = qhs_defaults(k);
    cfg.leaf_size = 8;
    const BnbResult r = branch_and_bound(models[k], cfg);
    if (r.proven_optimal && r.gap == 0.0 && near(r.incumbent.energy(), exact_solve(models[k]).energy())) {
      ++proven;
    }
  }

  std::mt19937_64 gen(1006);
  std::size_t violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + gen() % 14;
    const QuboModel m = test::random_model(gen, n, 0.5);
    PartialAssignment fixed(n);
    for (auto& f : fixed) f = static_cast<std::int8_t>(static_cast<int>(gen() % 3) - 1);
    std::vector<VarIndex> free_vars;
    Sample base(n, 0);
    for (VarIndex i = 0; i < n; ++i) {
      if (fixed[i] == kFree) {
        free_vars.push_back(i);
      } else {
        base[i] = static_cast<std::uint8_t>(fixed[i]);
      }
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (1ULL << free_vars.size()); ++mask) {
      for (std::size_t j = 0; j < free_vars.size(); ++j) base[free_vars[j]] = mask >> j & 1U;
      best = std::min(best, energy(m, base));
    }
    if (partial_lower_bound(m, fixed) > best + 1e-9 * std::max(1.0, std::abs(best))) ++violations;
  }
  const bool ok = proven == models.size() && violations == 0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("proven and equal to exact %zu/%zu, bound violations %zu/500", proven, models.size(),
              violations)};
}

Outcome ac5() {
  const auto t0 = Clock::now();
  const fs::path dir = fs::temp_directory_path() / "qhybrid_acceptance_micro";
  fs::remove_all(dir);
  const auto micro = gen_micro_instances(1, dir.string());

  std::size_t qhs_ok = 0;
  std::map<std::string, std::size_t> hits{{"kerberos", 0}, {"hss", 0}};
  for (const MicroInstance& mi : micro) {
    RunConfig cfg;
    cfg.repetitions = 10;
    cfg.solver = "qhs";
    const RunStats q = run_instance(mi.instance, cfg);
    const bool gaps_zero = std::all_of(q.runs.begin(), q.runs.end(), [](const RunRecord& r) {
      return r.gap && *r.gap == 0.0;
    });
    if (q.feasible_count == 10 && gaps_zero && *q.stddev == 0.0 && near(*q.avg, mi.optimum)) ++qhs_ok;
    for (auto& [solver, count] : hits) {
      cfg.solver = solver;
      const RunStats s = run_instance(mi.instance, cfg);
      if (s.median && near(*s.median, mi.optimum) && s.feasible_count == 10) ++count;
    }
  }
  fs::remove_all(dir);
  const double secs = seconds_since(t0);
  const double need = 0.9 * static_cast<double>(micro.size());
  const bool ok = qhs_ok == micro.size() && hits["kerberos"] >= need && hits["hss"] >= need &&
                  secs < 600.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("qhs exact %zu/%zu, kerberos %zu/%zu, hss %zu/%zu (need 90%%), %.1fs (limit 600s)",
              qhs_ok, micro.size(), hits["kerberos"], micro.size(), hits["hss"], micro.size(), secs)};
}

std::optional<fs::path> find_instance(const fs::path& root, const std::string& stem) {
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().stem() == stem) return entry.path();
  }
  return std::nullopt;
}

Outcome ac6() {
  const char* root = std::getenv("QOPTLIB_DIR");
  if (!root || !*root) return {Verdict::Skip, "QOPTLIB_DIR not set"};
  struct Row {
    const char* name;
    double value;
  };
  const Row rows[] = {{"wi4", 6700.0},  {"wi5", 6786.0},   {"BPP_3", 2.0},      {"BPP_4", 2.0},
                      {"P-n4_1", 97.0}, {"P-n5_1", 94.0}, {"MaxCut_10", 25.0}, {"MaxCut_20", 97.0}};
  std::size_t ok = 0;
  std::string failures;
  for (const Row& row : rows) {
    try {
      const auto path = find_instance(root, row.name);
      if (!path) throw Error("file not found");
      ProblemInstance inst = load_instance(path->string());
      RunConfig cfg;
      cfg.solver = "qhs";
      cfg.repetitions = 10;
      const RunStats s = run_instance(inst, cfg);
      if (s.avg && *s.avg == row.value && *s.stddev == 0.0 && *s.median == row.value) {
        ++ok;
      } else {
        failures += fmt(" %s=%.1f", row.name, s.avg ? *s.avg : -1.0);
      }
    } catch (const std::exception& e) {
      failures += std::string(" ") + row.name + "(" + e.what() + ")";
    }
  }
  return {ok == std::size(rows) ? Verdict::Pass : Verdict::Fail,
          fmt("%zu/%zu rows reproduced", ok, std::size(rows)) + failures};
}

Outcome ac7() {
  const std::vector<SolverTag> expected{
      {"qbsolv", HybridClass::CooperativeImbrication, Role::Classical, Role::Quantum},
      {"kerberos", HybridClass::CooperativeImbrication, Role::Shared, Role::Shared},
      {"hss", HybridClass::CooperativeImbrication, Role::Classical, Role::Quantum},
      {"qhs", HybridClass::CooperativeImbrication, Role::Quantum, Role::Classical},
  };
  bool ok = solver_registry() == expected;
  for (const SolverTag& t : expected) ok = ok && registry_lookup(t.name) == t;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("%zu workflows, exact equality %s", solver_registry().size(), ok ? "holds" : "broken")};
}

Outcome ac8() {
  const fs::path dir = fs::temp_directory_path() / "qhybrid_acceptance_determinism";
  fs::remove_all(dir);
  const auto micro = gen_micro_instances(1, dir.string());
  bool ok = true;
  std::string detail;
  for (const std::string solver : {"qhs", "kerberos", "hss", "qbsolv"}) {
    RunConfig cfg;
    for (const MicroInstance& mi : micro) cfg.instances.push_back((dir / mi.file).string());
    cfg.solver = solver;
    cfg.repetitions = 3;
    cfg.base_seed = 42;
    const std::string a = emit_table(run_benchmark(cfg), OutputFormat::Csv);
    const std::string b = emit_table(run_benchmark(cfg), OutputFormat::Csv);
    if (a != b) {
      ok = false;
      detail += " " + solver + " differs";
    }
  }
  fs::remove_all(dir);
  return {ok ? Verdict::Pass : Verdict::Fail,
          ok ? std::string("CSV byte-identical across repeated runs") : "CSV mismatch:" + detail};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"AC1 oracle equivalence", ac1},        {"AC2 heuristic quality", ac2},
      {"AC3 decomposer soundness", ac3},      {"AC4 branch-and-bound", ac4},
      {"AC5 micro benchmark", ac5},           {"AC6 reference instances", ac6},
      {"AC7 taxonomy registry", ac7},         {"AC8 determinism", ac8},
  };
  bool failed = false;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    std::printf("%s %s: %s\n", tag, name, o.detail.c_str());
    std::fflush(stdout);
    failed = failed || o.verdict == Verdict::Fail;
  }
  return failed ? 1 : 0;
}
