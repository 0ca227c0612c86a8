#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qhybrid/backend.hpp"
#include "qhybrid/heuristics.hpp"
#include "qhybrid/sample_set.hpp"

namespace qhybrid {

enum class BranchKind { Tabu, SA, QuantumDecomposed };

// One search engine of a portfolio. Only the fields matching `kind` are read.
struct BranchSpec {
  BranchKind kind = BranchKind::Tabu;
  TabuConfig tabu{};
  SaConfig sa{};
  // QuantumDecomposed: the backend receives ceil(fraction * n) clamped
  // variables per episode. fraction == 1 sends the whole model.
  std::shared_ptr<const SamplerBackend> backend;
  double fraction = 0.10;
  std::uint64_t seed = 0;

  static BranchSpec make_tabu(std::size_t sweeps, std::uint64_t seed);
  static BranchSpec make_sa(std::size_t sweeps, std::size_t reads, std::uint64_t seed);
  static BranchSpec make_quantum(std::shared_ptr<const SamplerBackend> backend, double fraction,
                                 std::uint64_t seed);
};

struct PortfolioConfig {
  std::vector<BranchSpec> branches;
  std::size_t iterations = 10;
  // HSS only: number of explorer/exploiter threads.
  std::size_t threads = 4;
  std::optional<std::chrono::milliseconds> time_limit;
  // Starting incumbent; drawn from `seed` when unset.
  std::optional<Sample> initial;
  std::uint64_t seed = 0;
};

struct PortfolioResult {
  SampleRecord best;
  // Kerberos: incumbent energy after each iteration barrier.
  // HSS: one trace per thread, incumbent energy after each explorer sweep.
  std::vector<std::vector<double>> traces;
  // Best record per branch (Kerberos, last successful episode) or per thread (HSS).
  std::vector<std::optional<SampleRecord>> worker_best;
  std::size_t failures = 0;
};

// Tabu (100 sweeps), SA (200 sweeps, one read) and a decomposed quantum branch.
PortfolioConfig kerberos_defaults(std::shared_ptr<const SamplerBackend> backend,
                                  std::uint64_t seed);

// Four threads; SA explorer (200 sweeps) and decomposed exploiter.
PortfolioConfig hss_defaults(std::shared_ptr<const SamplerBackend> backend, std::uint64_t seed);

// Kerberos-style racing branches. Every iteration all branches start from the
// shared incumbent and run one episode concurrently; at the barrier the
// smallest candidate (record_less order, current incumbent included) becomes
// the next incumbent. A branch that throws is skipped for that iteration; the
// solve fails only when every branch of an iteration fails.
PortfolioResult kerberos_solve(const QuboModel& model, const PortfolioConfig& cfg);

// HSS-style thread pool. Each thread anneals over the full model (explorer,
// taken from the SA branch) and after every sweep makes one exploiter attempt:
// clamp the thread incumbent's top-impact block, query the backend of the
// QuantumDecomposed branch, merge if strictly better and restart the walker
// there. Without a QuantumDecomposed branch the exploiter is disabled.
// Returns the best record across threads.
PortfolioResult hss_solve(const QuboModel& model, const PortfolioConfig& cfg);

}  // namespace qhybrid
