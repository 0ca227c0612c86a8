#include "qhybrid/decomposer.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "qhybrid/error.hpp"
#include "qhybrid/rng.hpp"

namespace qhybrid {

std::vector<VariableImpact> variable_impact(const QuboModel& model, const Sample& sample) {
  std::vector<VariableImpact> out;
  out.reserve(sample.size());
  for (VarIndex i = 0; i < model.num_variables(); ++i) {
    out.push_back({i, std::abs(delta_energy_flip(model, sample, i))});
  }
  std::stable_sort(out.begin(), out.end(), [](const VariableImpact& a, const VariableImpact& b) {
    return a.impact > b.impact;
  });
  return out;
}

Sample ClampedModel::expand(const Sample& full, const Sample& sub) const {
  if (sub.size() != to_full.size()) throw DimensionError("sub-assignment length mismatch");
  Sample out = full;
  for (std::size_t k = 0; k < sub.size(); ++k) out[to_full[k]] = sub[k];
  return out;
}

ClampedModel clamp(const QuboModel& model, const Sample& sample, std::vector<VarIndex> subset) {
  const std::size_t n = model.num_variables();
  if (sample.size() != n) throw DimensionError("clamp sample length does not match model");
  if (subset.empty()) throw ConfigError("clamp subset must not be empty");
  std::sort(subset.begin(), subset.end());
  if (std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
    throw ConfigError("clamp subset has repeated indices");
  }
  if (subset.back() >= n) throw IndexError("clamp subset index out of range");

  constexpr std::size_t kFixed = static_cast<std::size_t>(-1);
  std::vector<std::size_t> to_sub(n, kFixed);
  for (std::size_t k = 0; k < subset.size(); ++k) to_sub[subset[k]] = k;

  QuboBuilder b(subset.size());
  double offset = model.offset();
  for (VarIndex i = 0; i < n; ++i) {
    const double c = model.linear(i);
    if (c == 0.0) continue;
    if (to_sub[i] != kFixed) {
      b.add_linear(to_sub[i], c);
    } else if (sample[i]) {
      offset += c;
    }
  }
  for (const QuadTerm& t : model.quadratic_terms()) {
    const std::size_t a = to_sub[t.first];
    const std::size_t c = to_sub[t.second];
    if (a != kFixed && c != kFixed) {
      b.add_quadratic(a, c, t.coeff);
    } else if (a != kFixed) {
      if (sample[t.second]) b.add_linear(a, t.coeff);
    } else if (c != kFixed) {
      if (sample[t.first]) b.add_linear(c, t.coeff);
    } else if (sample[t.first] && sample[t.second]) {
      offset += t.coeff;
    }
  }
  b.add_offset(offset);
  return ClampedModel{b.build(), std::move(subset)};
}

std::size_t subproblem_size(double fraction, std::size_t n) {
  if (!(fraction > 0.0) || fraction > 1.0) throw ConfigError("fraction must lie in (0, 1]");
  if (n == 0) return 0;
  // The small epsilon keeps products such as 0.15 * 20 from rounding up.
  auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

RoundResult decomposition_step(const QuboModel& model, const Sample& incumbent,
                               std::size_t size, std::size_t window,
                               const SamplerBackend& backend) {
  const std::size_t n = model.num_variables();
  const double current = energy(model, incumbent);
  if (n == 0 || size == 0) return {incumbent, current, false};
  size = std::min(size, n);

  const auto ranking = variable_impact(model, incumbent);
  std::vector<VarIndex> subset;
  subset.reserve(size);
  const std::size_t start = (window * size) % n;
  for (std::size_t t = 0; t < size; ++t) subset.push_back(ranking[(start + t) % n].var);

  const ClampedModel sub = clamp(model, incumbent, std::move(subset));
  const SampleSet answer = backend.sample(sub.model);
  if (answer.empty()) return {incumbent, current, false};

  Sample merged = sub.expand(incumbent, answer.best().sample());
  const double merged_energy = energy(model, merged);
#ifndef NDEBUG
  assert(std::abs(merged_energy - answer.best().energy()) <=
         energy_tolerance(merged_energy) && "clamp identity violated");
#endif
  if (strictly_better(merged_energy, current)) return {std::move(merged), merged_energy, true};
  return {incumbent, current, false};
}

SampleRecord qbsolv_solve(const QuboModel& model, const DecomposerConfig& cfg) {
  const std::size_t n = model.num_variables();
  if (n == 0) throw ConfigError("qbsolv needs at least one variable");
  if (!cfg.backend) throw ConfigError("qbsolv needs a backend");
  if (cfg.max_rounds == 0 || cfg.stall_rounds == 0) {
    throw ConfigError("max_rounds and stall_rounds must be positive");
  }
  const std::size_t size = subproblem_size(cfg.fraction, n);
  const auto cap = cfg.backend->capability().max_vars;
  if (cap && size > *cap) {
    throw ConfigError("subproblem of " + std::to_string(size) + " variables exceeds backend '" +
                      cfg.backend->name() + "' capacity of " + std::to_string(*cap));
  }

  Rng rng(cfg.seed);
  TabuConfig tabu = cfg.tabu;
  tabu.seed = mix_seed(cfg.seed, 0);
  SampleRecord best = tabu_search(model, rng.random_sample(n), tabu);
  Sample working = best.sample();

  std::size_t stall = 0;
  for (std::size_t round = 0; round < cfg.max_rounds && stall < cfg.stall_rounds; ++round) {
    RoundResult step = decomposition_step(model, working, size, stall, *cfg.backend);

    TabuConfig refine = cfg.tabu;
    refine.max_sweeps = cfg.refine_sweeps;
    refine.seed = mix_seed(cfg.seed, round + 1);
    SampleRecord refined = tabu_search(model, step.sample, refine);
    working = refined.sample();

    if (strictly_better(refined.energy(), best.energy())) {
      best = std::move(refined);
      stall = 0;
    } else {
      ++stall;
    }
  }
  return best;
}

}  // namespace qhybrid
