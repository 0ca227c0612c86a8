#include "qhybrid/portfolio.hpp"

#include <algorithm>
#include <exception>
#include <iostream>
#include <thread>

#include "qhybrid/decomposer.hpp"
#include "qhybrid/error.hpp"
#include "qhybrid/rng.hpp"

namespace qhybrid {

BranchSpec BranchSpec::make_tabu(std::size_t sweeps, std::uint64_t seed) {
  BranchSpec b;
  b.kind = BranchKind::Tabu;
  b.tabu.max_sweeps = sweeps;
  b.seed = seed;
  return b;
}

BranchSpec BranchSpec::make_sa(std::size_t sweeps, std::size_t reads, std::uint64_t seed) {
  BranchSpec b;
  b.kind = BranchKind::SA;
  b.sa.sweeps = sweeps;
  b.sa.num_reads = reads;
  b.seed = seed;
  return b;
}

BranchSpec BranchSpec::make_quantum(std::shared_ptr<const SamplerBackend> backend,
                                    double fraction, std::uint64_t seed) {
  BranchSpec b;
  b.kind = BranchKind::QuantumDecomposed;
  b.backend = std::move(backend);
  b.fraction = fraction;
  b.seed = seed;
  return b;
}

PortfolioConfig kerberos_defaults(std::shared_ptr<const SamplerBackend> backend,
                                  std::uint64_t seed) {
  PortfolioConfig cfg;
  cfg.seed = seed;
  cfg.branches.push_back(BranchSpec::make_tabu(100, mix_seed(seed, 101)));
  cfg.branches.push_back(BranchSpec::make_sa(200, 1, mix_seed(seed, 102)));
  cfg.branches.push_back(BranchSpec::make_quantum(std::move(backend), 0.10, mix_seed(seed, 103)));
  return cfg;
}

PortfolioConfig hss_defaults(std::shared_ptr<const SamplerBackend> backend, std::uint64_t seed) {
  PortfolioConfig cfg;
  cfg.seed = seed;
  cfg.iterations = 5;
  cfg.threads = 4;
  cfg.branches.push_back(BranchSpec::make_sa(200, 1, mix_seed(seed, 201)));
  cfg.branches.push_back(BranchSpec::make_quantum(std::move(backend), 0.10, mix_seed(seed, 202)));
  return cfg;
}

namespace {

using Clock = std::chrono::steady_clock;

void check_quantum_branch(const BranchSpec& b, std::size_t n) {
  if (!b.backend) throw ConfigError("quantum branch needs a backend");
  const std::size_t size = subproblem_size(b.fraction, n);
  const auto cap = b.backend->capability().max_vars;
  if (cap && size > *cap) {
    throw ConfigError("quantum branch subproblem of " + std::to_string(size) +
                      " variables exceeds backend capacity " + std::to_string(*cap));
  }
}

Sample starting_point(const QuboModel& model, const PortfolioConfig& cfg) {
  if (cfg.initial) {
    if (cfg.initial->size() != model.num_variables()) {
      throw DimensionError("initial sample length does not match model");
    }
    return *cfg.initial;
  }
  return Rng(cfg.seed).random_sample(model.num_variables());
}

// Episode seed: the branch seed itself in iteration 0 so a one-iteration,
// one-branch portfolio reproduces a standalone engine run exactly.
std::uint64_t episode_seed(std::uint64_t seed, std::size_t iteration) {
  return iteration == 0 ? seed : mix_seed(seed, iteration);
}

SampleRecord run_episode(const QuboModel& model, const BranchSpec& b, const Sample& incumbent,
                         std::size_t iteration, std::size_t window) {
  switch (b.kind) {
    case BranchKind::Tabu: {
      TabuConfig t = b.tabu;
      t.seed = episode_seed(b.seed, iteration);
      return tabu_search(model, incumbent, t);
    }
    case BranchKind::SA: {
      const double t0 = b.sa.t_initial.value_or(
          std::max(default_initial_temperature(model), b.sa.t_final));
      const auto temps = geometric_schedule(t0, b.sa.t_final, b.sa.sweeps);
      const std::uint64_t seed = episode_seed(b.seed, iteration);
      std::optional<SampleRecord> best;
      for (std::size_t r = 0; r < std::max<std::size_t>(1, b.sa.num_reads); ++r) {
        Annealer walker(model, incumbent, mix_seed(seed, r));
        for (double t : temps) walker.sweep(t);
        SampleRecord rec(model, walker.best_state());
        if (!best || record_less(rec, *best)) best = std::move(rec);
      }
      return *best;
    }
    case BranchKind::QuantumDecomposed: {
      const std::size_t size = subproblem_size(b.fraction, model.num_variables());
      RoundResult step = decomposition_step(model, incumbent, size, window, *b.backend);
      return SampleRecord(model, std::move(step.sample));
    }
  }
  throw ConfigError("unknown branch kind");
}

}  // namespace

PortfolioResult kerberos_solve(const QuboModel& model, const PortfolioConfig& cfg) {
  if (cfg.branches.empty()) throw ConfigError("portfolio needs at least one branch");
  if (cfg.iterations == 0) throw ConfigError("portfolio needs at least one iteration");
  const std::size_t n = model.num_variables();
  for (const BranchSpec& b : cfg.branches) {
    if (b.kind == BranchKind::QuantumDecomposed) check_quantum_branch(b, n);
  }

  const auto started = Clock::now();
  SampleRecord incumbent(model, starting_point(model, cfg));
  PortfolioResult result{incumbent, {{}}, std::vector<std::optional<SampleRecord>>(cfg.branches.size()), 0};
  std::size_t stall = 0;

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    if (cfg.time_limit && it > 0 && Clock::now() - started >= *cfg.time_limit) break;

    std::vector<std::optional<SampleRecord>> outcome(cfg.branches.size());
    std::vector<std::string> errors(cfg.branches.size());
    {
      std::vector<std::jthread> workers;
      workers.reserve(cfg.branches.size());
      for (std::size_t k = 0; k < cfg.branches.size(); ++k) {
        workers.emplace_back([&, k] {
          try {
            outcome[k] = run_episode(model, cfg.branches[k], incumbent.sample(), it, stall);
          } catch (const std::exception& e) {
            errors[k] = e.what();
          }
        });
      }
    }  // barrier

    // Reduction in branch order over a total order: independent of which
    // branch finished first.
    std::optional<SampleRecord> next = incumbent;
    bool any = false;
    for (std::size_t k = 0; k < cfg.branches.size(); ++k) {
      if (!outcome[k]) {
        ++result.failures;
        std::cerr << "kerberos: branch " << k << " failed in iteration " << it << ": "
                  << errors[k] << '\n';
        continue;
      }
      any = true;
      result.worker_best[k] = outcome[k];
      if (record_less(*outcome[k], *next)) next = outcome[k];
    }
    if (!any) throw Error("kerberos: every branch failed in iteration " + std::to_string(it));

    if (strictly_better(next->energy(), incumbent.energy())) {
      stall = 0;
    } else {
      ++stall;
    }
    incumbent = std::move(*next);
    result.traces[0].push_back(incumbent.energy());
  }
  result.best = incumbent;
  return result;
}

namespace {

struct ThreadOutcome {
  std::optional<SampleRecord> best;
  std::vector<double> trace;
  std::string error;
};

ThreadOutcome hss_thread(const QuboModel& model, const BranchSpec& explorer,
                         const BranchSpec* exploiter, std::size_t thread_index,
                         std::size_t iterations, std::optional<Clock::time_point> deadline) {
  ThreadOutcome out;
  const std::size_t n = model.num_variables();
  const SaConfig& sa = explorer.sa;
  const double t0 =
      sa.t_initial.value_or(std::max(default_initial_temperature(model), sa.t_final));
  const auto temps = geometric_schedule(t0, sa.t_final, sa.sweeps);
  const std::size_t block = exploiter ? subproblem_size(exploiter->fraction, n) : 0;

  // Same seed layout as anneal_read, so thread t's first episode is read t of
  // sa_sample with the explorer's config.
  Rng init_rng(mix_seed(sa.seed, 2 * thread_index));
  Annealer walker(model, init_rng.random_sample(n), mix_seed(sa.seed, 2 * thread_index + 1));

  Sample inc = walker.best_state();
  double inc_energy = energy(model, inc);
  std::size_t window = 0;

  for (std::size_t it = 0; it < iterations; ++it) {
    if (it > 0) {
      if (deadline && Clock::now() >= *deadline) break;
      walker.reset(inc);
    }
    for (double t : temps) {
      walker.sweep(t);
      if (strictly_better(walker.best_energy(), inc_energy)) {
        inc = walker.best_state();
        inc_energy = energy(model, inc);
      }
      if (exploiter && n > 0) {
        RoundResult step = decomposition_step(model, inc, block, window, *exploiter->backend);
        if (step.improved) {
          inc = std::move(step.sample);
          inc_energy = step.energy;
          walker.reset(inc);
          window = 0;
        } else {
          ++window;
        }
      }
      out.trace.push_back(inc_energy);
    }
  }
  out.best = SampleRecord(model, inc);
  return out;
}

}  // namespace

PortfolioResult hss_solve(const QuboModel& model, const PortfolioConfig& cfg) {
  if (cfg.threads == 0) throw ConfigError("hss needs at least one thread");
  if (cfg.iterations == 0) throw ConfigError("hss needs at least one iteration");
  const BranchSpec* explorer = nullptr;
  const BranchSpec* exploiter = nullptr;
  for (const BranchSpec& b : cfg.branches) {
    if (b.kind == BranchKind::SA && !explorer) explorer = &b;
    if (b.kind == BranchKind::QuantumDecomposed && !exploiter) exploiter = &b;
  }
  if (!explorer) throw ConfigError("hss needs an SA branch as explorer");
  if (exploiter) check_quantum_branch(*exploiter, model.num_variables());

  std::optional<Clock::time_point> deadline;
  if (cfg.time_limit) deadline = Clock::now() + *cfg.time_limit;

  std::vector<ThreadOutcome> outcomes(cfg.threads);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < cfg.threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          outcomes[t] = hss_thread(model, *explorer, exploiter, t, cfg.iterations, deadline);
        } catch (const std::exception& e) {
          outcomes[t].error = e.what();
        }
      });
    }
  }

  PortfolioResult result{SampleRecord(model, Sample(model.num_variables(), 0)), {}, {}, 0};
  std::optional<SampleRecord> best;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    result.traces.push_back(outcomes[t].trace);
    result.worker_best.push_back(outcomes[t].best);
    if (!outcomes[t].best) {
      ++result.failures;
      std::cerr << "hss: thread " << t << " failed: " << outcomes[t].error << '\n';
      continue;
    }
    if (!best || record_less(*outcomes[t].best, *best)) best = outcomes[t].best;
  }
  if (!best) throw Error("hss: every thread failed");
  result.best = std::move(*best);
  return result;
}

}  // namespace qhybrid
