#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "qhybrid/heuristics.hpp"
#include "qhybrid/qubo.hpp"
#include "qhybrid/sample_set.hpp"

namespace qhybrid {

struct BackendCapability {
  // Largest model the backend accepts; unbounded when empty.
  std::optional<std::size_t> max_vars;
  // A backend flagged exact returns a certified global optimum.
  bool exact = false;
};

// The "quantum module" of the hybrid workflows: anything that turns a QUBO
// into samples. Implementations must be safe to call from several threads at
// once and must only return locally evaluated energies.
class SamplerBackend {
 public:
  virtual ~SamplerBackend() = default;

  virtual std::string name() const = 0;
  virtual BackendCapability capability() const = 0;
  virtual SampleSet sample(const QuboModel& model) const = 0;
};

inline constexpr std::size_t kExactMaxVars = 24;

// Exhaustive minimization by Gray-code enumeration with incremental flip
// deltas. Ties are broken towards the bit-lexicographically smallest sample.
// Throws CapacityError above kExactMaxVars variables.
SampleRecord exact_solve(const QuboModel& model);

class ExactBackend final : public SamplerBackend {
 public:
  std::string name() const override { return "exact"; }
  BackendCapability capability() const override { return {kExactMaxVars, true}; }
  SampleSet sample(const QuboModel& model) const override;
};

// Simulated-annealing stand-in for an annealing QPU.
class AnnealBackend final : public SamplerBackend {
 public:
  explicit AnnealBackend(SaConfig cfg = {}) : cfg_(std::move(cfg)) {}

  std::string name() const override { return "anneal"; }
  BackendCapability capability() const override { return {std::nullopt, false}; }
  SampleSet sample(const QuboModel& model) const override { return sa_sample(model, cfg_); }

  const SaConfig& config() const noexcept { return cfg_; }

 private:
  SaConfig cfg_;
};

inline std::shared_ptr<const SamplerBackend> anneal_backend(SaConfig cfg = {}) {
  return std::make_shared<AnnealBackend>(std::move(cfg));
}

// Builds a backend from a command-line style spec: "exact", "anneal" or
// "remote:<url>". `seed` seeds the anneal backend.
std::shared_ptr<const SamplerBackend> make_backend(const std::string& spec, std::uint64_t seed = 0);

}  // namespace qhybrid
