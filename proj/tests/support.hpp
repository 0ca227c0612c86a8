#pragma once

#include <cstdint>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "qhybrid/qubo.hpp"

namespace qhybrid::test {

// Random model with roughly `density` of the pairs coupled and coefficients
// uniform in [-scale, scale].
inline QuboModel random_model(std::mt19937_64& gen, std::size_t n, double density,
                              double scale = 10.0) {
  std::uniform_real_distribution<double> coeff(-scale, scale);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  QuboBuilder b(n);
  for (VarIndex i = 0; i < n; ++i) {
    b.add_linear(i, coeff(gen));
    for (VarIndex j = i + 1; j < n; ++j) {
      if (unit(gen) < density) b.add_quadratic(i, j, coeff(gen));
    }
  }
  b.add_offset(coeff(gen));
  return b.build();
}

// Same as above with integer coefficients, so ties between samples are common.
inline QuboModel random_int_model(std::mt19937_64& gen, std::size_t n, double density,
                                  int scale = 3) {
  std::uniform_int_distribution<int> coeff(-scale, scale);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  QuboBuilder b(n);
  for (VarIndex i = 0; i < n; ++i) {
    b.add_linear(i, coeff(gen));
    for (VarIndex j = i + 1; j < n; ++j) {
      if (unit(gen) < density) b.add_quadratic(i, j, coeff(gen));
    }
  }
  return b.build();
}


// Sizes cycle through [n_min, n_max], densities through {0.1, 0.3, 0.6, 1.0}.
inline std::vector<QuboModel> corpus(std::uint64_t seed, std::size_t count, std::size_t n_min,
                                     std::size_t n_max) {
  std::mt19937_64 gen(seed);
  const double densities[] = {0.1, 0.3, 0.6, 1.0};
  std::vector<QuboModel> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = n_min + k % (n_max - n_min + 1);
    out.push_back(random_model(gen, n, densities[k % 4]));
  }
  return out;
}

// Energy from the raw term lists; does not use qhybrid::energy.
inline double dense_energy(const QuboModel& m, std::uint64_t mask) {
  double e = m.offset();
  for (const LinearTerm& t : m.linear_terms()) {
    if (mask >> t.var & 1U) e += t.coeff;
  }
  for (const QuadTerm& t : m.quadratic_terms()) {
    if ((mask >> t.first & 1U) && (mask >> t.second & 1U)) e += t.coeff;
  }
  return e;
}

inline Sample mask_to_sample(std::uint64_t mask, std::size_t n) {
  Sample s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = mask >> i & 1U;
  return s;
}

// Truth-table minimum in plain counting order.
inline double truth_table_min(const QuboModel& m) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.num_variables()); ++mask) {
    best = std::min(best, dense_energy(m, mask));
  }
  return best;
}

inline bool near(double a, double b, double tol = 1e-9) {
  const double mag = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * mag;
}

}  // namespace qhybrid::test
