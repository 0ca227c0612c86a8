#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace qhybrid {

using VarIndex = std::size_t;

// A binary assignment, one byte per variable holding 0 or 1.
using Sample = std::vector<std::uint8_t>;

struct LinearTerm {
  VarIndex var;
  double coeff;
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

// Upper-triangular coupling, first < second.
struct QuadTerm {
  VarIndex first;
  VarIndex second;
  double coeff;
  friend bool operator==(const QuadTerm&, const QuadTerm&) = default;
};

struct Neighbor {
  VarIndex var;
  double coeff;
};

// Quadratic unconstrained binary model
//
//   E(x) = offset + sum_i linear_i x_i + sum_{i<j} quadratic_ij x_i x_j
//
// Immutable once built; every solver minimizes E. Terms are stored sparsely
// in canonical (sorted) order with zero coefficients dropped, plus a CSR
// adjacency so single-flip deltas cost O(degree).
class QuboModel {
 public:
  QuboModel() = default;

  std::size_t num_variables() const noexcept { return linear_.size(); }
  double offset() const noexcept { return offset_; }

  // Zero when the variable has no linear term.
  double linear(VarIndex i) const;
  // Zero when the pair has no coupling; order of (i, j) does not matter.
  double quadratic(VarIndex i, VarIndex j) const;

  std::vector<LinearTerm> linear_terms() const;
  std::span<const QuadTerm> quadratic_terms() const noexcept { return quadratic_; }
  std::span<const Neighbor> neighbors(VarIndex i) const;
  std::size_t degree(VarIndex i) const { return neighbors(i).size(); }

  friend bool operator==(const QuboModel& a, const QuboModel& b) {
    return a.offset_ == b.offset_ && a.linear_ == b.linear_ &&
           a.quadratic_ == b.quadratic_;
  }

 private:
  friend class QuboBuilder;

  std::vector<double> linear_;     // dense, zeros mean "absent"
  std::vector<QuadTerm> quadratic_;  // sorted by (first, second)
  std::vector<std::size_t> adj_start_;
  std::vector<Neighbor> adj_;
  double offset_ = 0.0;
};

// Accumulates terms (repeated keys add up) and produces a canonical model.
// Diagonal quadratic terms fold into the linear part since x*x == x.
class QuboBuilder {
 public:
  explicit QuboBuilder(std::size_t num_variables) : n_(num_variables) {}

  QuboBuilder& add_linear(VarIndex i, double coeff);
  QuboBuilder& add_quadratic(VarIndex i, VarIndex j, double coeff);
  QuboBuilder& add_offset(double value);

  std::size_t num_variables() const noexcept { return n_; }

  QuboModel build() const;

 private:
  void check(VarIndex i) const;

  std::size_t n_;
  std::map<VarIndex, double> linear_;
  std::map<std::pair<VarIndex, VarIndex>, double> quadratic_;
  double offset_ = 0.0;
};

double energy(const QuboModel& model, const Sample& sample);

// energy(flip(sample, i)) - energy(sample), in O(degree(i)).
double delta_energy_flip(const QuboModel& model, const Sample& sample, VarIndex i);

// 64-bit FNV-1a over the canonical term list. Stable across runs and
// platforms with IEEE-754 doubles.
std::uint64_t fingerprint(const QuboModel& model);

// Absolute tolerance used when deciding whether one energy strictly improves
// on another: 1e-9 scaled by the magnitude of the reference value.
inline double energy_tolerance(double reference) {
  double mag = reference < 0 ? -reference : reference;
  return 1e-9 * (mag > 1.0 ? mag : 1.0);
}

inline bool strictly_better(double candidate, double reference) {
  return candidate < reference - energy_tolerance(reference);
}

// Lexicographic order on bit strings, index 0 most significant.
bool bits_less(const Sample& a, const Sample& b);

}  // namespace qhybrid
