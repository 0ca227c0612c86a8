#include "qhybrid/qubo.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "qhybrid/error.hpp"

namespace qhybrid {

double QuboModel::linear(VarIndex i) const {
  if (i >= linear_.size()) {
    throw IndexError("variable " + std::to_string(i) + " out of range");
  }
  return linear_[i];
}

double QuboModel::quadratic(VarIndex i, VarIndex j) const {
  if (i > j) std::swap(i, j);
  for (const Neighbor& nb : neighbors(i)) {
    if (nb.var == j) return nb.coeff;
  }
  return 0.0;
}

std::vector<LinearTerm> QuboModel::linear_terms() const {
  std::vector<LinearTerm> out;
  for (VarIndex i = 0; i < linear_.size(); ++i) {
    if (linear_[i] != 0.0) out.push_back({i, linear_[i]});
  }
  return out;
}

std::span<const Neighbor> QuboModel::neighbors(VarIndex i) const {
  if (i >= linear_.size()) {
    throw IndexError("variable " + std::to_string(i) + " out of range");
  }
  return std::span<const Neighbor>(adj_).subspan(adj_start_[i],
                                                 adj_start_[i + 1] - adj_start_[i]);
}

void QuboBuilder::check(VarIndex i) const {
  if (i >= n_) {
    throw IndexError("variable " + std::to_string(i) + " out of range for n=" +
                     std::to_string(n_));
  }
}

QuboBuilder& QuboBuilder::add_linear(VarIndex i, double coeff) {
  check(i);
  linear_[i] += coeff;
  return *this;
}

QuboBuilder& QuboBuilder::add_quadratic(VarIndex i, VarIndex j, double coeff) {
  check(i);
  check(j);
  if (i == j) return add_linear(i, coeff);
  if (i > j) std::swap(i, j);
  quadratic_[{i, j}] += coeff;
  return *this;
}

QuboBuilder& QuboBuilder::add_offset(double value) {
  offset_ += value;
  return *this;
}

QuboModel QuboBuilder::build() const {
  QuboModel m;
  m.offset_ = offset_ + 0.0;  // normalizes -0.0
  m.linear_.assign(n_, 0.0);
  for (auto [i, c] : linear_) {
    m.linear_[i] = c + 0.0;
  }
  std::vector<std::size_t> deg(n_, 0);
  for (const auto& [key, c] : quadratic_) {
    if (c == 0.0) continue;
    m.quadratic_.push_back({key.first, key.second, c});
    ++deg[key.first];
    ++deg[key.second];
  }
  m.adj_start_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) m.adj_start_[i + 1] = m.adj_start_[i] + deg[i];
  m.adj_.resize(m.adj_start_[n_]);
  std::vector<std::size_t> fill(m.adj_start_.begin(), m.adj_start_.end() - 1);
  for (const QuadTerm& t : m.quadratic_) {
    m.adj_[fill[t.first]++] = {t.second, t.coeff};
    m.adj_[fill[t.second]++] = {t.first, t.coeff};
  }
  for (std::size_t i = 0; i < n_; ++i) {
    std::sort(m.adj_.begin() + static_cast<std::ptrdiff_t>(m.adj_start_[i]),
              m.adj_.begin() + static_cast<std::ptrdiff_t>(m.adj_start_[i + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.var < b.var; });
  }
  return m;
}

namespace {

void require_length(const QuboModel& model, const Sample& sample) {
  if (sample.size() != model.num_variables()) {
    throw DimensionError("sample has " + std::to_string(sample.size()) +
                         " bits, model has " + std::to_string(model.num_variables()) +
                         " variables");
  }
}

}  // namespace

double energy(const QuboModel& model, const Sample& sample) {
  require_length(model, sample);
  double e = model.offset();
  for (VarIndex i = 0; i < sample.size(); ++i) {
    if (sample[i]) e += model.linear(i);
  }
  for (const QuadTerm& t : model.quadratic_terms()) {
    if (sample[t.first] && sample[t.second]) e += t.coeff;
  }
  return e;
}

double delta_energy_flip(const QuboModel& model, const Sample& sample, VarIndex i) {
  require_length(model, sample);
  if (i >= sample.size()) {
    throw IndexError("flip index " + std::to_string(i) + " out of range");
  }
  double field = model.linear(i);
  for (const Neighbor& nb : model.neighbors(i)) {
    if (sample[nb.var]) field += nb.coeff;
  }
  return sample[i] ? -field : field;
}

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void byte(std::uint8_t b) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) byte(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
};

}  // namespace

std::uint64_t fingerprint(const QuboModel& model) {
  Fnv1a f;
  f.u64(model.num_variables());
  f.f64(model.offset());
  auto lin = model.linear_terms();
  f.u64(lin.size());
  for (const LinearTerm& t : lin) {
    f.u64(t.var);
    f.f64(t.coeff);
  }
  auto quad = model.quadratic_terms();
  f.u64(quad.size());
  for (const QuadTerm& t : quad) {
    f.u64(t.first);
    f.u64(t.second);
    f.f64(t.coeff);
  }
  return f.h;
}

bool bits_less(const Sample& a, const Sample& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace qhybrid
