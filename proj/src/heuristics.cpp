#include "qhybrid/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qhybrid/error.hpp"
#include "qhybrid/rng.hpp"

namespace qhybrid {

namespace {

// Applies a flip of variable i to the state and its cached deltas.
void apply_flip(const QuboModel& model, Sample& x, std::vector<double>& delta, VarIndex i) {
  x[i] ^= 1;
  delta[i] = -delta[i];
  const double sign = x[i] ? 1.0 : -1.0;
  for (const Neighbor& nb : model.neighbors(i)) {
    delta[nb.var] += nb.coeff * sign * (x[nb.var] ? -1.0 : 1.0);
  }
}

std::vector<double> all_deltas(const QuboModel& model, const Sample& x) {
  std::vector<double> d(x.size());
  for (VarIndex i = 0; i < x.size(); ++i) d[i] = delta_energy_flip(model, x, i);
  return d;
}

}  // namespace

SampleRecord tabu_search(const QuboModel& model, const Sample& init, const TabuConfig& cfg) {
  const std::size_t n = model.num_variables();
  if (init.size() != n) throw DimensionError("tabu init length does not match model");
  if (n == 0) return SampleRecord(model, init);

  const std::size_t tenure = std::min(cfg.tenure, n - 1);
  Rng rng(cfg.seed);
  Sample x = init;
  std::vector<double> delta = all_deltas(model, x);
  double current = energy(model, x);
  double best = current;
  Sample best_x = x;
  // Variable i may move again once the iteration counter exceeds tabu_until[i].
  std::vector<std::size_t> tabu_until(n, 0);

  for (std::size_t it = 1; it <= cfg.max_sweeps; ++it) {
    std::size_t chosen = n;
    double chosen_delta = std::numeric_limits<double>::infinity();
    std::uint64_t ties = 0;
    for (VarIndex i = 0; i < n; ++i) {
      const bool tabu = tabu_until[i] >= it;
      if (tabu && !(cfg.aspiration && current + delta[i] < best)) continue;
      if (delta[i] < chosen_delta) {
        chosen = i;
        chosen_delta = delta[i];
        ties = 1;
      } else if (delta[i] == chosen_delta && rng.below(++ties) == 0) {
        chosen = i;
      }
    }
    if (chosen == n) continue;  // every move tabu; unreachable with tenure < n

    current += chosen_delta;
    apply_flip(model, x, delta, chosen);
    tabu_until[chosen] = it + tenure;
    if (current < best) {
      best = current;
      best_x = x;
    }
  }
  return SampleRecord(model, std::move(best_x));
}

double default_initial_temperature(const QuboModel& model) {
  double t = 0.0;
  for (VarIndex i = 0; i < model.num_variables(); ++i) {
    double s = std::abs(model.linear(i));
    for (const Neighbor& nb : model.neighbors(i)) s += std::abs(nb.coeff);
    t = std::max(t, s);
  }
  return t;
}

std::vector<double> geometric_schedule(double t_initial, double t_final, std::size_t sweeps) {
  if (!(t_final > 0.0) || !(t_initial >= t_final)) {
    throw ConfigError("annealing schedule needs 0 < t_final <= t_initial");
  }
  std::vector<double> temps(sweeps);
  if (sweeps == 1) {
    temps[0] = t_final;
    return temps;
  }
  const double ratio = std::pow(t_final / t_initial, 1.0 / static_cast<double>(sweeps - 1));
  double t = t_initial;
  for (std::size_t k = 0; k < sweeps; ++k) {
    temps[k] = t;
    t *= ratio;
  }
  temps.back() = t_final;
  return temps;
}

bool metropolis_accept(double delta, double temperature, double u) {
  if (delta <= 0.0) return true;
  if (!(temperature > 0.0)) return false;
  return u < std::exp(-delta / temperature);
}

Annealer::Annealer(const QuboModel& model, Sample init, std::uint64_t seed)
    : model_(&model), rng_(seed), state_(std::move(init)) {
  if (state_.size() != model.num_variables()) {
    throw DimensionError("annealer init length does not match model");
  }
  recompute();
  best_state_ = state_;
  best_ = current_;
}

void Annealer::recompute() {
  delta_ = all_deltas(*model_, state_);
  current_ = energy(*model_, state_);
}

void Annealer::sweep(double temperature) {
  const std::size_t n = state_.size();
  for (VarIndex i = 0; i < n; ++i) {
    const double d = delta_[i];
    bool accept;
    if (d <= 0.0) {
      accept = true;
    } else {
      accept = metropolis_accept(d, temperature, rng_.uniform());
      if (accept) ++uphill_;
    }
    if (!accept) continue;
    current_ += d;
    apply_flip(*model_, state_, delta_, i);
    if (current_ < best_) {
      best_ = current_;
      best_state_ = state_;
    }
  }
}

void Annealer::reset(Sample state) {
  if (state.size() != state_.size()) throw DimensionError("reset length does not match model");
  state_ = std::move(state);
  recompute();
  if (current_ < best_) {
    best_ = current_;
    best_state_ = state_;
  }
}

namespace {

double resolve_t_initial(const QuboModel& model, const SaConfig& cfg) {
  if (cfg.t_initial) return *cfg.t_initial;
  // An empty model has no scale; any valid schedule does nothing useful.
  return std::max(default_initial_temperature(model), cfg.t_final);
}

}  // namespace

SampleRecord anneal_read(const QuboModel& model, const SaConfig& cfg, std::size_t read_index) {
  if (cfg.sweeps == 0) throw ConfigError("annealing needs at least one sweep");
  const auto temps = geometric_schedule(resolve_t_initial(model, cfg), cfg.t_final, cfg.sweeps);
  Rng init_rng(mix_seed(cfg.seed, 2 * read_index));
  Annealer walker(model, init_rng.random_sample(model.num_variables()),
                  mix_seed(cfg.seed, 2 * read_index + 1));
  for (double t : temps) walker.sweep(t);
  return SampleRecord(model, walker.best_state());
}

SampleSet sa_sample(const QuboModel& model, const SaConfig& cfg) {
  if (cfg.num_reads == 0) throw ConfigError("num_reads must be positive");
  std::vector<SampleRecord> reads;
  reads.reserve(cfg.num_reads);
  for (std::size_t r = 0; r < cfg.num_reads; ++r) reads.push_back(anneal_read(model, cfg, r));
  return SampleSet(model, std::move(reads));
}

}  // namespace qhybrid
