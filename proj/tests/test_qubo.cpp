#include <random>

#include "doctest.h"
#include "qhybrid/error.hpp"
#include "qhybrid/qubo.hpp"
#include "qhybrid/qubo_json.hpp"
#include "qhybrid/sample_set.hpp"
#include "support.hpp"

using namespace qhybrid;
using qhybrid::test::near;

namespace {

QuboModel small_model() {
  return QuboBuilder(2).add_linear(0, 1.0).add_linear(1, -2.0).add_quadratic(0, 1, 3.0).build();
}

}  // namespace

TEST_CASE("energy of offset-only and two-variable models") {
  const QuboModel constant = QuboBuilder(3).add_offset(5.0).build();
  CHECK(energy(constant, {0, 1, 1}) == 5.0);
  CHECK(energy(constant, {1, 1, 1}) == 5.0);

  const QuboModel m = small_model();
  CHECK(energy(m, {1, 1}) == 2.0);
  CHECK(energy(m, {0, 0}) == 0.0);
  CHECK(energy(m, {0, 1}) == -2.0);
  CHECK_THROWS_AS(energy(m, {1}), DimensionError);
}

TEST_CASE("delta_energy_flip") {
  const QuboModel m = small_model();
  CHECK(delta_energy_flip(m, {0, 1}, 0) == 4.0);
  CHECK_THROWS_AS(delta_energy_flip(m, {0, 1}, 2), IndexError);

  const QuboModel iso = QuboBuilder(3).add_linear(2, 7.5).add_quadratic(0, 1, 1.0).build();
  CHECK(delta_energy_flip(iso, {1, 1, 0}, 2) == 7.5);

  std::mt19937_64 gen(11);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + k % 16;
    const QuboModel r = test::random_model(gen, n, 0.4);
    Sample s(n);
    for (auto& b : s) b = gen() & 1U;
    const VarIndex i = gen() % n;
    const double before = energy(r, s);
    const double d = delta_energy_flip(r, s, i);
    Sample f = s;
    f[i] ^= 1U;
    REQUIRE(near(d, energy(r, f) - before));
    CHECK(near(d + delta_energy_flip(r, f, i), 0.0));
  }
}

TEST_CASE("builder canonical form") {
  QuboBuilder b(4);
  b.add_quadratic(2, 1, 1.5).add_quadratic(1, 2, -1.5).add_quadratic(3, 0, 2.0);
  b.add_quadratic(1, 1, 4.0);  // diagonal folds into linear
  const QuboModel m = b.build();
  CHECK(m.quadratic_terms().size() == 1);
  CHECK(m.quadratic(0, 3) == 2.0);
  CHECK(m.quadratic(3, 0) == 2.0);
  CHECK(m.quadratic(1, 2) == 0.0);
  CHECK(m.linear(1) == 4.0);
  CHECK(m.linear_terms().size() == 1);
  CHECK(m.degree(0) == 1);
  CHECK(m.degree(1) == 0);
  CHECK_THROWS_AS(QuboBuilder(2).add_linear(2, 1.0), IndexError);
  CHECK_THROWS_AS(QuboBuilder(2).add_quadratic(0, 5, 1.0), IndexError);
}

TEST_CASE("diagonal folding preserves every energy") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> c(-4.0, 4.0);
  for (std::size_t n = 1; n <= 10; ++n) {
    QuboBuilder with_diag(n), folded(n);
    for (VarIndex i = 0; i < n; ++i) {
      const double lin = c(gen), diag = c(gen);
      with_diag.add_linear(i, lin).add_quadratic(i, i, diag);
      folded.add_linear(i, lin + diag);
      for (VarIndex j = i + 1; j < n; ++j) {
        const double q = c(gen);
        with_diag.add_quadratic(i, j, q);
        folded.add_quadratic(j, i, q);
      }
    }
    const QuboModel a = with_diag.build(), b = folded.build();
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      const Sample s = test::mask_to_sample(mask, n);
      REQUIRE(near(energy(a, s), energy(b, s)));
    }
  }
}

TEST_CASE("fingerprint") {
  const QuboModel a = small_model();
  const QuboModel b =
      QuboBuilder(2).add_quadratic(1, 0, 3.0).add_linear(1, -2.0).add_linear(0, 1.0).build();
  CHECK(a == b);
  CHECK(fingerprint(a) == fingerprint(b));
  const QuboModel c =
      QuboBuilder(2).add_linear(0, 1.0).add_linear(1, -2.0).add_quadratic(0, 1, 3.5).build();
  CHECK(fingerprint(a) != fingerprint(c));
  CHECK(fingerprint(QuboBuilder(2).build()) != fingerprint(QuboBuilder(3).build()));
}

TEST_CASE("QUBO JSON round trip is bit exact") {
  std::mt19937_64 gen(3);
  for (int k = 0; k < 50; ++k) {
    const QuboModel m = test::random_model(gen, 1 + k % 12, 0.5, 1e3);
    const QuboModel back = parse_qubo(dump_qubo(m));
    CHECK(back == m);
    CHECK(fingerprint(back) == fingerprint(m));
  }
  CHECK(parse_qubo(R"({"n":0})").num_variables() == 0);
}

TEST_CASE("QUBO JSON rejects malformed documents") {
  CHECK_THROWS_AS(parse_qubo(R"({"n":2,"quadratic":[[1,0,1.0]]})"), FormatError);
  CHECK_THROWS_AS(parse_qubo(R"({"n":2,"quadratic":[[1,1,1.0]]})"), FormatError);
  CHECK_THROWS_AS(parse_qubo(R"({"n":2,"quadratic":[[0,2,1.0]]})"), FormatError);
  CHECK_THROWS_AS(parse_qubo(R"({"n":2,"linear":[[2,1.0]]})"), FormatError);
  CHECK_THROWS_AS(parse_qubo(R"({"n":2,"linear":[[0,1.0],[0,2.0]]})"), FormatError);
  CHECK_THROWS_AS(parse_qubo(R"({"linear":[]})"), FormatError);
  CHECK_THROWS_AS(parse_qubo("not json"), FormatError);
}

TEST_CASE("sample set ordering") {
  const QuboModel m = QuboBuilder(2).add_linear(0, 1.0).add_linear(1, 1.0).build();
  SampleSet set(m, {SampleRecord(m, {1, 1}), SampleRecord(m, {1, 0}), SampleRecord(m, {0, 1}),
                    SampleRecord(m, {0, 0})});
  REQUIRE(set.size() == 4);
  CHECK(set.records()[0].sample() == Sample{0, 0});
  CHECK(set.records()[1].sample() == Sample{0, 1});  // energy tie, lexicographic
  CHECK(set.records()[2].sample() == Sample{1, 0});
  CHECK(set.records()[3].sample() == Sample{1, 1});
  CHECK(set.best().energy() == 0.0);
  CHECK(set.model_fingerprint() == fingerprint(m));

  SampleSet other(m, {SampleRecord(m, {0, 0}, 3)});
  set.merge(other);
  CHECK(set.size() == 5);
  CHECK(set.records()[0].energy() == 0.0);

  CHECK_THROWS(SampleRecord(m, {0, 2}));
  CHECK_THROWS_AS(SampleRecord(m, {0}), DimensionError);
  CHECK_THROWS_AS(SampleSet(m).best(), Error);
}
