#include "qhybrid/backend.hpp"

#include <bit>
#include <cstdint>
#include <vector>

#include "qhybrid/error.hpp"
#include "qhybrid/remote.hpp"

namespace qhybrid {

namespace {

// True when mask a precedes mask b as bit strings read from variable 0 up.
bool mask_lex_less(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t diff = a ^ b;
  if (diff == 0) return false;
  return ((a >> std::countr_zero(diff)) & 1U) == 0;
}

}  // namespace

SampleRecord exact_solve(const QuboModel& model) {
  const std::size_t n = model.num_variables();
  if (n > kExactMaxVars) {
    throw CapacityError("exact solver accepts at most " + std::to_string(kExactMaxVars) +
                        " variables, got " + std::to_string(n));
  }

  // Flattened adjacency for the hot loop.
  std::vector<std::uint32_t> start(n + 1, 0);
  std::vector<std::uint32_t> nbr;
  std::vector<double> coeff;
  for (VarIndex i = 0; i < n; ++i) {
    for (const Neighbor& nb : model.neighbors(i)) {
      nbr.push_back(static_cast<std::uint32_t>(nb.var));
      coeff.push_back(nb.coeff);
    }
    start[i + 1] = static_cast<std::uint32_t>(nbr.size());
  }

  std::vector<double> delta(n);
  for (VarIndex i = 0; i < n; ++i) delta[i] = model.linear(i);
  std::vector<double> sign(n, 1.0);  // +1 while x_i == 0, -1 while x_i == 1

  double e = model.offset();
  std::uint32_t mask = 0;
  double best_e = e;
  std::uint32_t best_mask = 0;

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto j = static_cast<std::uint32_t>(std::countr_zero(step));
    e += delta[j];
    mask ^= (1U << j);
    delta[j] = -delta[j];
    sign[j] = -sign[j];
    // x_j went 0->1 when sign[j] is now -1.
    const double dj = -sign[j];
    for (std::uint32_t k = start[j]; k < start[j + 1]; ++k) {
      delta[nbr[k]] += coeff[k] * dj * sign[nbr[k]];
    }
    // Incremental sums drift by a few ulps; energies within tolerance are
    // treated as ties so the lexicographic rule stays meaningful.
    const double tol = energy_tolerance(best_e);
    if (e < best_e - tol) {
      best_e = e;
      best_mask = mask;
    } else if (e <= best_e + tol && mask_lex_less(mask, best_mask)) {
      best_mask = mask;
      if (e < best_e) best_e = e;
    }
  }

  Sample s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<std::uint8_t>((best_mask >> i) & 1U);
  return SampleRecord(model, std::move(s));
}

SampleSet ExactBackend::sample(const QuboModel& model) const {
  std::vector<SampleRecord> one;
  one.push_back(exact_solve(model));
  return SampleSet(model, std::move(one));
}

std::shared_ptr<const SamplerBackend> make_backend(const std::string& spec, std::uint64_t seed) {
  if (spec == "exact") return std::make_shared<ExactBackend>();
  if (spec == "anneal") {
    SaConfig cfg;
    cfg.seed = seed;
    return std::make_shared<AnnealBackend>(cfg);
  }
  const std::string prefix = "remote:";
  if (spec.rfind(prefix, 0) == 0) {
    RemoteSamplerConfig cfg;
    cfg.endpoint = spec.substr(prefix.size());
    return std::make_shared<RemoteBackend>(cfg);
  }
  throw ConfigError("unknown backend '" + spec + "' (expected exact, anneal or remote:<url>)");
}

}  // namespace qhybrid
