#include "qhybrid/bnb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <queue>
#include <thread>

#include "qhybrid/backend.hpp"
#include "qhybrid/decomposer.hpp"
#include "qhybrid/error.hpp"
#include "qhybrid/rng.hpp"

namespace qhybrid {

double partial_lower_bound(const QuboModel& model, const PartialAssignment& fixed) {
  const std::size_t n = model.num_variables();
  if (fixed.size() != n) throw DimensionError("partial assignment length does not match model");

  double bound = model.offset();
  std::vector<double> field(n, 0.0);  // a_i for free variables
  std::vector<double> optimistic(n, 0.0);
  for (VarIndex i = 0; i < n; ++i) {
    if (fixed[i] == kFree) {
      field[i] = model.linear(i);
    } else if (fixed[i] == 1) {
      bound += model.linear(i);
    }
  }
  for (const QuadTerm& t : model.quadratic_terms()) {
    const std::int8_t a = fixed[t.first];
    const std::int8_t b = fixed[t.second];
    if (a == kFree && b == kFree) {
      optimistic[t.first] += std::min(0.0, t.coeff);
    } else if (a == kFree) {
      if (b == 1) field[t.first] += t.coeff;
    } else if (b == kFree) {
      if (a == 1) field[t.second] += t.coeff;
    } else if (a == 1 && b == 1) {
      bound += t.coeff;
    }
  }
  for (VarIndex i = 0; i < n; ++i) {
    if (fixed[i] == kFree) bound += std::min(0.0, field[i] + optimistic[i]);
  }
  return bound;
}

std::string format_progress(const BnbProgress& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "nodes=%zu incumbent=%.6f bound=%.6f gap=%.6g", p.nodes,
                p.incumbent, p.bound, p.gap);
  return buf;
}

BnbConfig qhs_defaults(std::uint64_t seed) {
  BnbConfig cfg;
  cfg.primals.push_back(BranchSpec::make_tabu(500, mix_seed(seed, 301)));
  cfg.primals.push_back(BranchSpec::make_sa(1000, 10, mix_seed(seed, 302)));
  SaConfig sim;
  sim.seed = mix_seed(seed, 303);
  cfg.primals.push_back(BranchSpec::make_quantum(anneal_backend(sim), 1.0, mix_seed(seed, 304)));
  return cfg;
}

namespace {

using Clock = std::chrono::steady_clock;

// Solves the complete problem with one primal heuristic.
SampleRecord run_primal(const QuboModel& model, const BranchSpec& spec, std::uint64_t seed) {
  const std::size_t n = model.num_variables();
  switch (spec.kind) {
    case BranchKind::Tabu: {
      TabuConfig t = spec.tabu;
      t.seed = mix_seed(seed, 1);
      return tabu_search(model, Rng(seed).random_sample(n), t);
    }
    case BranchKind::SA: {
      SaConfig s = spec.sa;
      s.seed = seed;
      return sa_sample(model, s).best();
    }
    case BranchKind::QuantumDecomposed: {
      if (!spec.backend) throw ConfigError("quantum primal needs a backend");
      if (spec.fraction >= 1.0) {
        const auto cap = spec.backend->capability().max_vars;
        if (cap && n > *cap) throw CapacityError("model exceeds quantum primal capacity");
        return spec.backend->sample(model).best();
      }
      DecomposerConfig d;
      d.backend = spec.backend;
      d.fraction = spec.fraction;
      d.seed = seed;
      return qbsolv_solve(model, d);
    }
  }
  throw ConfigError("unknown primal kind");
}

// Incumbent shared between the tree search and the primal thread; only a
// strictly better energy replaces it.
class SharedIncumbent {
 public:
  explicit SharedIncumbent(SampleRecord r) : rec_(std::move(r)) {}

  bool offer(const SampleRecord& r) {
    std::lock_guard lock(mu_);
    if (!strictly_better(r.energy(), rec_.energy())) return false;
    rec_ = r;
    return true;
  }
  SampleRecord get() const {
    std::lock_guard lock(mu_);
    return rec_;
  }

 private:
  mutable std::mutex mu_;
  SampleRecord rec_;
};

struct Node {
  PartialAssignment fixed;
  double bound;
  std::size_t depth;
  std::uint64_t id;
};

struct NodeOrder {
  // priority_queue keeps the "largest" on top; invert for best-first.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

// Free variable with the largest achievable flip delta given the fixings.
VarIndex pick_branch_variable(const QuboModel& model, const PartialAssignment& fixed) {
  const std::size_t n = model.num_variables();
  std::vector<double> field(n, 0.0), spread(n, 0.0);
  for (VarIndex i = 0; i < n; ++i) {
    if (fixed[i] == kFree) field[i] = model.linear(i);
  }
  for (const QuadTerm& t : model.quadratic_terms()) {
    const std::int8_t a = fixed[t.first];
    const std::int8_t b = fixed[t.second];
    if (a == kFree && b == kFree) {
      spread[t.first] += std::abs(t.coeff);
      spread[t.second] += std::abs(t.coeff);
    } else if (a == kFree && b == 1) {
      field[t.first] += t.coeff;
    } else if (b == kFree && a == 1) {
      field[t.second] += t.coeff;
    }
  }
  VarIndex best = n;
  double best_impact = -1.0;
  for (VarIndex i = 0; i < n; ++i) {
    if (fixed[i] != kFree) continue;
    const double impact = std::abs(field[i]) + spread[i];
    if (impact > best_impact) {
      best_impact = impact;
      best = i;
    }
  }
  return best;
}

SampleRecord close_leaf(const QuboModel& model, const PartialAssignment& fixed) {
  Sample base(fixed.size());
  std::vector<VarIndex> free_vars;
  for (VarIndex i = 0; i < fixed.size(); ++i) {
    if (fixed[i] == kFree) {
      free_vars.push_back(i);
      base[i] = 0;
    } else {
      base[i] = static_cast<std::uint8_t>(fixed[i]);
    }
  }
  if (free_vars.empty()) return SampleRecord(model, std::move(base));
  const ClampedModel sub = clamp(model, base, std::move(free_vars));
  const SampleRecord best = exact_solve(sub.model);
  return SampleRecord(model, sub.expand(base, best.sample()));
}

double relative_gap(double incumbent, double bound) {
  return std::max(0.0, incumbent - bound) / std::max(1e-12, std::abs(incumbent));
}

}  // namespace

BnbResult branch_and_bound(const QuboModel& model, const BnbConfig& cfg) {
  const std::size_t n = model.num_variables();
  if (n == 0) throw ConfigError("branch-and-bound needs at least one variable");
  if (cfg.leaf_size > kExactMaxVars) {
    throw ConfigError("leaf_size must not exceed " + std::to_string(kExactMaxVars));
  }
  if (cfg.node_limit == 0) throw ConfigError("node_limit must be positive");
  const auto started = Clock::now();

  // Phase 1: primal heuristics in parallel seed the incumbent.
  SharedIncumbent shared{SampleRecord(model, Sample(n, 0))};
  {
    std::vector<std::jthread> workers;
    for (std::size_t k = 0; k < cfg.primals.size(); ++k) {
      workers.emplace_back([&, k] {
        try {
          shared.offer(run_primal(model, cfg.primals[k], cfg.primals[k].seed));
        } catch (const std::exception& e) {
          std::cerr << "qhs: primal " << k << " failed: " << e.what() << '\n';
        }
      });
    }
  }

  // Phase 2: primals keep restarting with fresh seeds alongside the search.
  std::jthread background;
  if (cfg.background_primals && !cfg.primals.empty()) {
    background = std::jthread([&](std::stop_token stop) {
      for (std::uint64_t round = 1; !stop.stop_requested(); ++round) {
        for (const BranchSpec& p : cfg.primals) {
          if (stop.stop_requested()) return;
          try {
            shared.offer(run_primal(model, p, mix_seed(p.seed, round)));
          } catch (const std::exception&) {
            // already reported in phase 1
          }
        }
      }
    });
  }

  SampleRecord incumbent = shared.get();
  BnbResult result{incumbent, 0.0, 0.0, false, 0, Termination::Proven, {}};

  auto log = [&](double bound) {
    BnbProgress p{result.nodes_explored, incumbent.energy(), std::min(bound, incumbent.energy()),
                  relative_gap(incumbent.energy(), bound)};
    result.progress.push_back(p);
    if (cfg.on_progress) cfg.on_progress(p);
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::uint64_t next_id = 0;
  {
    PartialAssignment root(n, kFree);
    const double b = partial_lower_bound(model, root);
    open.push(Node{std::move(root), b, 0, next_id++});
  }
  log(open.top().bound);

  while (true) {
    // Primal improvements are folded in at node boundaries.
    SampleRecord latest = shared.get();
    if (strictly_better(latest.energy(), incumbent.energy())) incumbent = std::move(latest);

    const double prune_at = incumbent.energy() - energy_tolerance(incumbent.energy());
    if (open.empty() || open.top().bound >= prune_at) {
      result.termination = Termination::Proven;
      break;
    }
    if (result.nodes_explored >= cfg.node_limit) {
      result.termination = Termination::NodeLimit;
      break;
    }
    if (cfg.time_limit && Clock::now() - started >= *cfg.time_limit) {
      result.termination = Termination::TimeLimit;
      break;
    }

    Node node = open.top();
    open.pop();
    ++result.nodes_explored;

    const auto free_count = static_cast<std::size_t>(
        std::count(node.fixed.begin(), node.fixed.end(), kFree));
    if (free_count <= cfg.leaf_size) {
      SampleRecord leaf = close_leaf(model, node.fixed);
      if (strictly_better(leaf.energy(), incumbent.energy())) {
        incumbent = leaf;
        shared.offer(leaf);
      }
    } else {
      const VarIndex v = pick_branch_variable(model, node.fixed);
      for (std::int8_t value : {std::int8_t{0}, std::int8_t{1}}) {
        PartialAssignment child = node.fixed;
        child[v] = value;
        const double b = std::max(node.bound, partial_lower_bound(model, child));
        if (b < incumbent.energy() - energy_tolerance(incumbent.energy())) {
          open.push(Node{std::move(child), b, node.depth + 1, next_id++});
        }
      }
    }

    if (cfg.log_every > 0 && result.nodes_explored % cfg.log_every == 0) {
      log(open.empty() ? incumbent.energy() : open.top().bound);
    }
  }

  if (background.joinable()) {
    background.request_stop();
    background.join();
  }

  result.incumbent = incumbent;
  if (result.termination == Termination::Proven) {
    result.proven_optimal = true;
    result.lower_bound = incumbent.energy();
    result.gap = 0.0;
    log(incumbent.energy());
  } else {
    result.proven_optimal = false;
    result.lower_bound = std::min(open.top().bound, incumbent.energy());
    result.gap = relative_gap(incumbent.energy(), result.lower_bound);
    log(result.lower_bound);
  }
  return result;
}

}  // namespace qhybrid
