#include <random>

#include "doctest.h"
#include "qhybrid/backend.hpp"
#include "qhybrid/bnb.hpp"
#include "qhybrid/error.hpp"
#include "qhybrid/rng.hpp"
#include "support.hpp"

using namespace qhybrid;
using qhybrid::test::near;

namespace {

// Minimum over every completion of `fixed`, by enumeration of the free bits.
double completion_min(const QuboModel& m, const PartialAssignment& fixed) {
  std::vector<VarIndex> free_vars;
  Sample base(fixed.size());
  for (VarIndex i = 0; i < fixed.size(); ++i) {
    if (fixed[i] == kFree) {
      free_vars.push_back(i);
    } else {
      base[i] = static_cast<std::uint8_t>(fixed[i]);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (1ULL << free_vars.size()); ++mask) {
    for (std::size_t k = 0; k < free_vars.size(); ++k) base[free_vars[k]] = mask >> k & 1U;
    best = std::min(best, energy(m, base));
  }
  return best;
}

PartialAssignment random_partial(std::mt19937_64& gen, std::size_t n) {
  PartialAssignment p(n);
  for (auto& v : p) v = static_cast<std::int8_t>(static_cast<int>(gen() % 3) - 1);
  return p;
}

BnbConfig quick_config(std::uint64_t seed) {
  BnbConfig cfg;
  cfg.primals = {BranchSpec::make_tabu(100, seed)};
  return cfg;
}

}  // namespace

TEST_CASE("bound with everything fixed is the energy") {
  std::mt19937_64 gen(1);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 1 + k % 10;
    const QuboModel m = test::random_model(gen, n, 0.6);
    const Sample s = Rng(static_cast<std::uint64_t>(k)).random_sample(n);
    const PartialAssignment p(s.begin(), s.end());
    CHECK(near(partial_lower_bound(m, p), energy(m, s)));
  }
}

TEST_CASE("bound on a separable model is exact") {
  const QuboModel m =
      QuboBuilder(4).add_linear(0, -1.5).add_linear(1, 2.0).add_linear(3, -0.5).add_offset(1.0).build();
  CHECK(partial_lower_bound(m, PartialAssignment(4, kFree)) == -1.0);
  CHECK_THROWS_AS(partial_lower_bound(m, PartialAssignment(3, kFree)), DimensionError);
}

TEST_CASE("bound is admissible and grows under fixing") {
  std::mt19937_64 gen(2024);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 1 + k % 14;
    const QuboModel m = test::random_model(gen, n, 0.2 + 0.2 * (k % 4));
    PartialAssignment p = random_partial(gen, n);
    const double b = partial_lower_bound(m, p);
    REQUIRE(b <= completion_min(m, p) + 1e-9);
    for (VarIndex i = 0; i < n; ++i) {
      if (p[i] != kFree) continue;
      for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
        PartialAssignment child = p;
        child[i] = v;
        CHECK(partial_lower_bound(m, child) >= b - 1e-9);
      }
    }
  }
}

TEST_CASE("branch and bound proves the exact optimum") {
  std::mt19937_64 gen(7);
  for (std::uint64_t k = 0; k < 60; ++k) {
    const std::size_t n = 1 + k % 20;
    const QuboModel m = test::random_model(gen, n, 0.5);
    BnbConfig cfg = quick_config(k);
    cfg.leaf_size = k % 6;
    cfg.background_primals = (k % 2 == 0);
    const BnbResult r = branch_and_bound(m, cfg);
    CHECK(r.proven_optimal);
    CHECK(r.termination == Termination::Proven);
    CHECK(r.gap == 0.0);
    CHECK(near(r.incumbent.energy(), exact_solve(m).energy()));
    CHECK(r.lower_bound <= r.incumbent.energy() + 1e-9);
  }
}

TEST_CASE("branch and bound without primals") {
  std::mt19937_64 gen(70);
  const QuboModel m = test::random_model(gen, 12, 0.5);
  BnbConfig cfg;
  cfg.leaf_size = 3;
  const BnbResult r = branch_and_bound(m, cfg);
  CHECK(r.proven_optimal);
  CHECK(near(r.incumbent.energy(), exact_solve(m).energy()));
}

TEST_CASE("node limit stops with a gap") {
  std::mt19937_64 gen(3);
  const QuboModel m = test::random_model(gen, 40, 0.5);
  BnbConfig cfg = quick_config(1);
  cfg.node_limit = 1;
  const BnbResult r = branch_and_bound(m, cfg);
  CHECK(r.termination == Termination::NodeLimit);
  CHECK_FALSE(r.proven_optimal);
  CHECK(r.gap > 0.0);
  CHECK(r.nodes_explored == 1);
  CHECK(r.lower_bound <= r.incumbent.energy() + 1e-9);
  CHECK(near(r.incumbent.energy(), energy(m, r.incumbent.sample())));
}

TEST_CASE("time limit stops with a gap") {
  std::mt19937_64 gen(4);
  const QuboModel m = test::random_model(gen, 80, 0.5);
  BnbConfig cfg = quick_config(2);
  cfg.leaf_size = 10;
  cfg.time_limit = std::chrono::milliseconds(100);
  const BnbResult r = branch_and_bound(m, cfg);
  CHECK(r.termination == Termination::TimeLimit);
  CHECK(r.gap > 0.0);
  CHECK(r.lower_bound <= r.incumbent.energy() + 1e-9);
}

TEST_CASE("progress log") {
  std::mt19937_64 gen(5);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const QuboModel m = test::random_model(gen, 22, 0.4);
    BnbConfig cfg;
    cfg.primals = {BranchSpec::make_tabu(5, k)};
    cfg.background_primals = false;
    cfg.leaf_size = 2;
    cfg.log_every = 1;
    std::size_t seen = 0;
    cfg.on_progress = [&](const BnbProgress&) { ++seen; };
    const BnbResult r = branch_and_bound(m, cfg);
    REQUIRE(r.proven_optimal);
    CHECK(seen == r.progress.size());
    REQUIRE(r.incumbent.energy() < 0.0);
    for (std::size_t i = 1; i < r.progress.size(); ++i) {
      CHECK(r.progress[i].gap <= r.progress[i - 1].gap + 1e-12);
      CHECK(r.progress[i].bound >= r.progress[i - 1].bound - 1e-9);
      CHECK(r.progress[i].incumbent <= r.progress[i - 1].incumbent);
    }
    CHECK(r.progress.back().gap == 0.0);
  }
  CHECK(format_progress({12, -3.5, -4.25, 0.5}) ==
        "nodes=12 incumbent=-3.500000 bound=-4.250000 gap=0.5");
}

TEST_CASE("gap numerator never grows on penalty-style models") {
  // Positive optimum with a negative root bound: the relative gap may rise
  // when the incumbent improves, the absolute distance may not.
  QuboBuilder b(16);
  for (VarIndex i = 0; i < 16; ++i) {
    b.add_linear(i, -10.0);
    for (VarIndex j = i + 1; j < 16; ++j) b.add_quadratic(i, j, (i / 4 == j / 4) ? 20.0 : 1.0);
  }
  b.add_offset(60.0);
  const QuboModel m = b.build();
  BnbConfig cfg;
  cfg.leaf_size = 2;
  cfg.log_every = 1;
  const BnbResult r = branch_and_bound(m, cfg);
  REQUIRE(r.proven_optimal);
  CHECK(near(r.incumbent.energy(), exact_solve(m).energy()));
  for (std::size_t i = 1; i < r.progress.size(); ++i) {
    const auto& a = r.progress[i - 1];
    const auto& c = r.progress[i];
    CHECK(c.incumbent - c.bound <= a.incumbent - a.bound + 1e-9);
  }
}

TEST_CASE("branch and bound configuration errors") {
  BnbConfig cfg;
  cfg.leaf_size = kExactMaxVars + 1;
  CHECK_THROWS_AS(branch_and_bound(QuboBuilder(3).build(), cfg), ConfigError);
  CHECK_THROWS_AS(branch_and_bound(QuboBuilder(0).build(), BnbConfig{}), ConfigError);
}

TEST_CASE("qhs defaults") {
  const BnbConfig cfg = qhs_defaults(9);
  REQUIRE(cfg.primals.size() == 3);
  CHECK(cfg.primals[0].kind == BranchKind::Tabu);
  CHECK(cfg.primals[1].kind == BranchKind::SA);
  CHECK(cfg.primals[2].kind == BranchKind::QuantumDecomposed);
  CHECK(cfg.primals[2].backend->name() == "anneal");
  CHECK(cfg.leaf_size <= kExactMaxVars);
}
