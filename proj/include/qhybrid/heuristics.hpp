#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qhybrid/qubo.hpp"
#include "qhybrid/rng.hpp"
#include "qhybrid/sample_set.hpp"

namespace qhybrid {

struct TabuConfig {
  // Iterations a flipped variable stays tabu. Clamped to n - 1 at run time.
  std::size_t tenure = 20;
  // One sweep = scan all n single-flip moves and apply the best admissible one.
  std::size_t max_sweeps = 500;
  std::uint64_t seed = 0;
  // Allow a tabu move when it strictly improves the best energy seen.
  bool aspiration = true;
};

// Single-flip tabu search from `init`. Returns the best sample visited.
// Deterministic in (model, init, seed); the seed only breaks ties between
// equally good moves.
SampleRecord tabu_search(const QuboModel& model, const Sample& init, const TabuConfig& cfg);

struct SaConfig {
  // Defaults to default_initial_temperature(model) when unset.
  std::optional<double> t_initial;
  double t_final = 1e-3;
  std::size_t sweeps = 1000;
  std::size_t num_reads = 10;
  std::uint64_t seed = 0;
};

// Largest total coupling magnitude touching a single variable,
// max_i (|linear_i| + sum_j |quadratic_ij|). A flip never changes the energy by
// more than this, so annealing starting here accepts almost every move.
double default_initial_temperature(const QuboModel& model);

// Geometric temperatures t_initial -> t_final over `sweeps` steps (inclusive
// of both ends). Throws ConfigError unless 0 < t_final <= t_initial.
std::vector<double> geometric_schedule(double t_initial, double t_final, std::size_t sweeps);

// Metropolis rule: accept non-worsening moves, otherwise accept with
// probability exp(-delta / T) given a uniform draw u in [0, 1).
bool metropolis_accept(double delta, double temperature, double u);

// Single-flip Metropolis walker with incrementally maintained flip deltas.
// Also used directly by the HSS explorer, which needs to interleave
// exploiter steps between sweeps.
class Annealer {
 public:
  Annealer(const QuboModel& model, Sample init, std::uint64_t seed);

  // One pass over the variables in index order at the given temperature.
  void sweep(double temperature);

  // Replaces the walker state (keeps the best-seen record if still better).
  void reset(Sample state);

  const Sample& state() const noexcept { return state_; }
  double current_energy() const noexcept { return current_; }
  const Sample& best_state() const noexcept { return best_state_; }
  double best_energy() const noexcept { return best_; }

  // Number of accepted moves with delta > 0, for instrumentation.
  std::size_t uphill_accepted() const noexcept { return uphill_; }

 private:
  void recompute();

  const QuboModel* model_;
  Rng rng_;
  Sample state_;
  std::vector<double> delta_;
  double current_ = 0.0;
  Sample best_state_;
  double best_ = 0.0;
  std::size_t uphill_ = 0;
};

// One annealing read: random initial state drawn from the read's seed,
// followed by the geometric schedule. Returns the best state visited.
SampleRecord anneal_read(const QuboModel& model, const SaConfig& cfg, std::size_t read_index);

// num_reads independent reads, seeded per read index so the result does not
// depend on how reads are scheduled.
SampleSet sa_sample(const QuboModel& model, const SaConfig& cfg);

}  // namespace qhybrid
