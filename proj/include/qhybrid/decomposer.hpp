#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "qhybrid/backend.hpp"
#include "qhybrid/heuristics.hpp"
#include "qhybrid/qubo.hpp"

namespace qhybrid {

struct VariableImpact {
  VarIndex var;
  double impact;
  friend bool operator==(const VariableImpact&, const VariableImpact&) = default;
};

// |delta_energy_flip(model, sample, i)| for every variable, sorted by impact
// descending, ties by index ascending.
std::vector<VariableImpact> variable_impact(const QuboModel& model, const Sample& sample);

// Sub-model over `subset` with every other variable fixed to its value in
// `sample`. Sub-variable k corresponds to full variable to_full[k]; subset
// order is normalized to ascending indices.
struct ClampedModel {
  QuboModel model;
  std::vector<VarIndex> to_full;

  // Writes a sub-assignment back over a copy of the full sample.
  Sample expand(const Sample& full, const Sample& sub) const;
};

// For every sub-assignment s: energy(sub, s) == energy(model, sample with s
// written over the subset). Throws ConfigError on an empty subset and
// IndexError/ConfigError on out-of-range or repeated indices.
ClampedModel clamp(const QuboModel& model, const Sample& sample, std::vector<VarIndex> subset);

struct DecomposerConfig {
  double fraction = 0.10;
  std::size_t max_rounds = 100;
  std::size_t stall_rounds = 10;
  std::shared_ptr<const SamplerBackend> backend = std::make_shared<ExactBackend>();
  TabuConfig tabu{};
  // Sweeps of the tabu refinement run after each merge step.
  std::size_t refine_sweeps = 50;
  std::uint64_t seed = 0;
};

// Size of the subproblem handed to the backend: ceil(fraction * n), in [1, n].
std::size_t subproblem_size(double fraction, std::size_t n);

struct RoundResult {
  Sample sample;
  double energy;
  bool improved;
};

// One improvement step on `incumbent`: take `size` variables from the impact
// ranking starting at position window * size (wrapping), clamp, solve the
// sub-model on the backend, and merge the best sub-assignment if it strictly
// lowers the full energy.
RoundResult decomposition_step(const QuboModel& model, const Sample& incumbent,
                               std::size_t size, std::size_t window,
                               const SamplerBackend& backend);

// QBSolv-style solve: tabu from a random start, then rounds of
// decomposition_step + short tabu refinement until max_rounds or stall_rounds
// consecutive rounds without improvement. The window advances on each
// non-improving round and resets to the top-impact block after an
// improvement.
SampleRecord qbsolv_solve(const QuboModel& model, const DecomposerConfig& cfg);

}  // namespace qhybrid
