#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qhybrid/portfolio.hpp"
#include "qhybrid/qubo.hpp"
#include "qhybrid/sample_set.hpp"

namespace qhybrid {

// One entry per variable: kFree, 0 or 1.
using PartialAssignment = std::vector<std::int8_t>;
inline constexpr std::int8_t kFree = -1;

// Term-wise relaxation bound on the minimum over all completions of `fixed`:
//
//   offset + fixed-only terms
//     + sum_{i free} min(0, a_i + sum_{j free, j > i} min(0, Q_ij))
//
// where a_i = linear_i + sum_{j fixed to 1} Q_ij. Each free-free coupling is
// charged once, to its lower index. Never exceeds the true minimum; exact when
// nothing is free or no free-free coupling exists.
double partial_lower_bound(const QuboModel& model, const PartialAssignment& fixed);

enum class Termination { Proven, NodeLimit, TimeLimit };
enum class Branching { ImpactDescending };

struct BnbProgress {
  std::size_t nodes;
  double incumbent;
  double bound;
  double gap;
};

// "nodes=<n> incumbent=<e> bound=<b> gap=<g>"
std::string format_progress(const BnbProgress& p);

struct BnbConfig {
  // Primal heuristics run concurrently to seed the incumbent, then keep
  // running (with fresh seeds) while the tree search is active.
  std::vector<BranchSpec> primals;
  std::size_t node_limit = 1'000'000;
  std::optional<std::chrono::milliseconds> time_limit;
  // Nodes with at most this many free variables are closed by exact_solve.
  std::size_t leaf_size = 20;
  Branching branching = Branching::ImpactDescending;
  bool background_primals = true;
  // A progress entry is recorded every `log_every` nodes (and at start/end).
  std::size_t log_every = 1000;
  std::function<void(const BnbProgress&)> on_progress;
};

struct BnbResult {
  SampleRecord incumbent;
  double lower_bound;
  // (incumbent - lower_bound) / max(1e-12, |incumbent|); 0 iff proven optimal.
  double gap;
  bool proven_optimal;
  std::size_t nodes_explored;
  Termination termination;
  std::vector<BnbProgress> progress;
};

// Tabu (500 sweeps), SA (1000 sweeps, 10 reads) and an annealing backend
// sampling the whole model.
BnbConfig qhs_defaults(std::uint64_t seed);

// Best-first branch-and-bound on the term-wise bound, ordered by bound then
// depth (deeper first). Branches on the free variable with the largest
// possible flip delta at the node. Node/time limits end the search with a
// positive gap instead of an error.
BnbResult branch_and_bound(const QuboModel& model, const BnbConfig& cfg);

}  // namespace qhybrid
