#include "qhybrid/encoders.hpp"

#include <algorithm>
#include <cmath>

#include "qhybrid/error.hpp"

namespace qhybrid {

Encoding::Encoding(ProblemKind kind, std::vector<VarSlot> slots,
                   std::map<std::string, double> penalties, std::uint64_t instance_ref,
                   double objective_scale, double objective_constant)
    : kind_(kind),
      slots_(std::move(slots)),
      penalties_(std::move(penalties)),
      instance_ref_(instance_ref),
      scale_(objective_scale),
      constant_(objective_constant) {
  for (VarIndex i = 0; i < slots_.size(); ++i) {
    if (!index_.emplace(slots_[i], i).second) throw Error("encoding slots are not unique");
  }
}

const VarSlot& Encoding::slot(VarIndex i) const {
  if (i >= slots_.size()) throw IndexError("variable index out of range");
  return slots_[i];
}

std::optional<VarIndex> Encoding::find(const VarSlot& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarIndex Encoding::index(const VarSlot& s) const {
  if (auto i = find(s)) return *i;
  throw IndexError(std::string("no variable for slot '") + s.kind + "'");
}

namespace {

double max_entry(const Matrix& m) {
  double d = 0.0;
  for (const auto& row : m)
    for (double v : row) d = std::max(d, v);
  return d;
}

// weight * (sum_i coeff_i x_i - target)^2
void add_squared(QuboBuilder& b, const std::vector<std::pair<VarIndex, double>>& terms,
                 double target, double weight) {
  b.add_offset(weight * target * target);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto [vi, ci] = terms[i];
    b.add_linear(vi, weight * (ci * ci - 2.0 * target * ci));
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      b.add_quadratic(vi, terms[j].first, 2.0 * weight * ci * terms[j].second);
    }
  }
}

std::size_t slack_width(double capacity) {
  std::size_t k = 0;
  while (std::ldexp(1.0, static_cast<int>(k)) < capacity + 1.0) ++k;
  return k;
}

bool integral(double v) { return std::floor(v) == v; }

void check_length(const Encoding& enc, const Sample& sample) {
  if (sample.size() != enc.num_variables()) {
    throw DimensionError("sample length does not match encoding");
  }
}

void check_ref(const Encoding& enc, const ProblemInstance& inst) {
  if (enc.problem_kind() != kind_of(inst) || enc.instance_ref() != instance_fingerprint(inst)) {
    throw ConfigError("encoding does not belong to this instance");
  }
}

}  // namespace

Encoded encode_tsp(const TspInstance& inst) {
  validate(inst);
  const std::size_t n = inst.size();
  if (n < 3) throw InstanceError("tsp needs at least 3 nodes");
  const double a = static_cast<double>(n) * max_entry(inst.dist) + 1.0;
  auto x = [n](std::size_t v, std::size_t p) { return v * n + p; };

  std::vector<VarSlot> slots;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t p = 0; p < n; ++p) slots.push_back({'x', v, p, 0});

  QuboBuilder b(n * n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::pair<VarIndex, double>> row, col;
    for (std::size_t p = 0; p < n; ++p) {
      row.emplace_back(x(v, p), 1.0);
      col.emplace_back(x(p, v), 1.0);
    }
    add_squared(b, row, 1.0, a);
    add_squared(b, col, 1.0, a);
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        if (u != v) b.add_quadratic(x(u, p), x(v, (p + 1) % n), inst.dist[u][v]);
      }
    }
  }
  return {b.build(), Encoding(ProblemKind::TSP, std::move(slots), {{"one_hot", a}},
                              instance_fingerprint(inst), 1.0, 0.0)};
}

DecodedSolution decode_tsp(const Encoding& enc, const Sample& sample, const TspInstance& inst) {
  check_ref(enc, inst);
  check_length(enc, sample);
  const std::size_t n = inst.size();
  DecodedSolution out;
  native::Route tour(n, n);
  std::vector<std::size_t> row_count(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t count = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (sample[enc.index({'x', v, p, 0})]) {
        ++count;
        ++row_count[v];
        tour[p] = v;
      }
    }
    if (count != 1) return out;
  }
  if (std::any_of(row_count.begin(), row_count.end(), [](std::size_t c) { return c != 1; })) {
    return out;
  }
  out.feasible = true;
  out.objective = native::tour_length(inst.dist, tour);
  out.native = TspSolution{std::move(tour)};
  return out;
}

Encoded encode_vrp(const VrpInstance& inst) {
  validate(inst);
  const std::size_t c = inst.n_clients();
  const std::size_t k = inst.vehicles;
  if (k == 0) throw InstanceError("vrp needs at least one vehicle");
  if (k > c) throw InstanceError("vrp has more vehicles than clients");
  const bool capacitated = inst.capacity && inst.demands;
  if (capacitated) {
    if (!integral(*inst.capacity) ||
        !std::all_of(inst.demands->begin(), inst.demands->end(), integral)) {
      throw InstanceError("vrp capacity encoding needs integral demands and capacity");
    }
  }
  const double d = max_entry(inst.dist);
  const double a = static_cast<double>(c + 1) * d + 1.0;
  const double a2 = a + static_cast<double>(c) * (a + d);
  const std::size_t width = capacitated ? slack_width(*inst.capacity) : 0;

  std::vector<VarSlot> slots;
  for (std::size_t v = 1; v <= c; ++v)
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t p = 0; p < c; ++p) slots.push_back({'x', v, r, p});
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t bit = 0; bit < width; ++bit) slots.push_back({'s', r, bit, 0});
  auto x = [c, k](std::size_t v, std::size_t r, std::size_t p) {
    return ((v - 1) * k + r) * c + p;
  };
  auto s = [c, k, width](std::size_t r, std::size_t bit) { return c * k * c + r * width + bit; };

  QuboBuilder b(slots.size());
  for (std::size_t v = 1; v <= c; ++v) {
    std::vector<std::pair<VarIndex, double>> group;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t p = 0; p < c; ++p) group.emplace_back(x(v, r, p), 1.0);
    add_squared(b, group, 1.0, a);
  }
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t p = 0; p < c; ++p) {
      for (std::size_t v = 1; v <= c; ++v)
        for (std::size_t w = v + 1; w <= c; ++w) b.add_quadratic(x(v, r, p), x(w, r, p), a2);
    }
    for (std::size_t p = 0; p + 1 < c; ++p) {
      for (std::size_t w = 1; w <= c; ++w) {
        b.add_linear(x(w, r, p + 1), a);
        for (std::size_t v = 1; v <= c; ++v) b.add_quadratic(x(v, r, p), x(w, r, p + 1), -a);
      }
    }
    for (std::size_t v = 1; v <= c; ++v) {
      b.add_linear(x(v, r, 0), inst.dist[0][v]);
      b.add_linear(x(v, r, c - 1), inst.dist[v][0]);
      for (std::size_t p = 0; p + 1 < c; ++p) {
        b.add_linear(x(v, r, p), inst.dist[v][0]);
        for (std::size_t w = 1; w <= c; ++w) {
          const double arc = (v == w ? 0.0 : inst.dist[v][w]) - inst.dist[v][0];
          b.add_quadratic(x(v, r, p), x(w, r, p + 1), arc);
        }
      }
    }
    if (capacitated) {
      std::vector<std::pair<VarIndex, double>> load;
      for (std::size_t v = 1; v <= c; ++v)
        for (std::size_t p = 0; p < c; ++p) load.emplace_back(x(v, r, p), (*inst.demands)[v - 1]);
      for (std::size_t bit = 0; bit < width; ++bit)
        load.emplace_back(s(r, bit), std::ldexp(1.0, static_cast<int>(bit)));
      add_squared(b, load, *inst.capacity, a);
    }
  }

  std::map<std::string, double> penalties{{"one_hot", a}, {"slot", a2}, {"contiguity", a}};
  if (capacitated) penalties["capacity"] = a;
  return {b.build(), Encoding(ProblemKind::VRP, std::move(slots), std::move(penalties),
                              instance_fingerprint(inst), 1.0, 0.0)};
}

DecodedSolution decode_vrp(const Encoding& enc, const Sample& sample, const VrpInstance& inst) {
  check_ref(enc, inst);
  check_length(enc, sample);
  const std::size_t c = inst.n_clients();
  const std::size_t k = inst.vehicles;
  DecodedSolution out;
  std::vector<std::size_t> seen(c + 1, 0);
  std::vector<native::Route> routes(k);
  for (std::size_t r = 0; r < k; ++r) {
    bool ended = false;
    double load = 0.0;
    for (std::size_t p = 0; p < c; ++p) {
      std::size_t count = 0, who = 0;
      for (std::size_t v = 1; v <= c; ++v) {
        if (sample[enc.index({'x', v, r, p})]) {
          ++count;
          who = v;
        }
      }
      if (count > 1) return out;
      if (count == 0) {
        ended = true;
        continue;
      }
      if (ended) return out;  // gap inside the route
      ++seen[who];
      routes[r].push_back(who);
      if (inst.demands) load += (*inst.demands)[who - 1];
    }
    if (enc.penalties().contains("capacity")) {
      double slack = 0.0;
      for (std::size_t bit = 0; auto i = enc.find({'s', r, bit, 0}); ++bit) {
        if (sample[*i]) slack += std::ldexp(1.0, static_cast<int>(bit));
      }
      if (load + slack != *inst.capacity) return out;
    }
  }
  if (std::any_of(seen.begin() + 1, seen.end(), [](std::size_t n) { return n != 1; })) return out;
  out.feasible = true;
  out.objective = native::routes_length(inst.dist, routes);
  out.native = VrpSolution{std::move(routes)};
  return out;
}

Encoded encode_bpp(const BppInstance& inst) {
  validate(inst);
  const std::size_t m = inst.weights.size();
  const std::size_t bins = inst.max_bins;
  if (bins == 0) throw InstanceError("bpp needs max_bins >= 1");
  if (!integral(inst.capacity) ||
      !std::all_of(inst.weights.begin(), inst.weights.end(), integral)) {
    throw InstanceError("bpp encoding needs integral weights and capacity");
  }
  const double a = static_cast<double>(bins) + 1.0;
  const std::size_t width = slack_width(inst.capacity);

  std::vector<VarSlot> slots;
  for (std::size_t bin = 0; bin < bins; ++bin) slots.push_back({'y', bin, 0, 0});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t bin = 0; bin < bins; ++bin) slots.push_back({'x', i, bin, 0});
  for (std::size_t bin = 0; bin < bins; ++bin)
    for (std::size_t bit = 0; bit < width; ++bit) slots.push_back({'s', bin, bit, 0});
  auto y = [](std::size_t bin) { return bin; };
  auto x = [bins](std::size_t i, std::size_t bin) { return bins + i * bins + bin; };
  auto s = [bins, m, width](std::size_t bin, std::size_t bit) {
    return bins + m * bins + bin * width + bit;
  };

  QuboBuilder b(slots.size());
  for (std::size_t bin = 0; bin < bins; ++bin) b.add_linear(y(bin), 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::pair<VarIndex, double>> group;
    for (std::size_t bin = 0; bin < bins; ++bin) group.emplace_back(x(i, bin), 1.0);
    add_squared(b, group, 1.0, a);
  }
  for (std::size_t bin = 0; bin < bins; ++bin) {
    std::vector<std::pair<VarIndex, double>> terms;
    for (std::size_t i = 0; i < m; ++i) terms.emplace_back(x(i, bin), inst.weights[i]);
    for (std::size_t bit = 0; bit < width; ++bit)
      terms.emplace_back(s(bin, bit), std::ldexp(1.0, static_cast<int>(bit)));
    terms.emplace_back(y(bin), -inst.capacity);
    add_squared(b, terms, 0.0, a);
  }
  return {b.build(), Encoding(ProblemKind::BPP, std::move(slots),
                              {{"one_hot", a}, {"capacity", a}}, instance_fingerprint(inst),
                              1.0, 0.0)};
}

DecodedSolution decode_bpp(const Encoding& enc, const Sample& sample, const BppInstance& inst) {
  check_ref(enc, inst);
  check_length(enc, sample);
  const std::size_t m = inst.weights.size();
  const std::size_t bins = inst.max_bins;
  DecodedSolution out;
  std::vector<std::size_t> bin_of(m, bins);
  std::vector<double> load(bins, 0.0);
  std::vector<bool> used(bins, false);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t count = 0;
    for (std::size_t bin = 0; bin < bins; ++bin) {
      if (sample[enc.index({'x', i, bin, 0})]) {
        ++count;
        bin_of[i] = bin;
      }
    }
    if (count != 1) return out;
    load[bin_of[i]] += inst.weights[i];
    used[bin_of[i]] = true;
  }
  for (std::size_t bin = 0; bin < bins; ++bin) {
    // An opened bin must hold something and a used bin must be opened.
    const bool open = sample[enc.index({'y', bin, 0, 0})] != 0;
    if (open != used[bin]) return out;
    double slack = 0.0;
    for (std::size_t bit = 0; auto i = enc.find({'s', bin, bit, 0}); ++bit) {
      if (sample[*i]) slack += std::ldexp(1.0, static_cast<int>(bit));
    }
    if (load[bin] + slack != (open ? inst.capacity : 0.0)) return out;
  }
  out.feasible = true;
  out.objective = static_cast<double>(native::bins_used(bin_of));
  out.native = BppSolution{std::move(bin_of)};
  return out;
}

Encoded encode_mcp(const McpInstance& inst) {
  validate(inst);
  if (inst.n < 2) throw InstanceError("maxcut needs at least 2 nodes");
  std::vector<VarSlot> slots;
  for (std::size_t v = 0; v < inst.n; ++v) slots.push_back({'x', v, 0, 0});
  QuboBuilder b(inst.n);
  for (const McpEdge& e : inst.edges) {
    b.add_linear(e.u, -e.weight);
    b.add_linear(e.v, -e.weight);
    b.add_quadratic(e.u, e.v, 2.0 * e.weight);
  }
  return {b.build(), Encoding(ProblemKind::MCP, std::move(slots), {},
                              instance_fingerprint(inst), -1.0, 0.0)};
}

DecodedSolution decode_mcp(const Encoding& enc, const Sample& sample, const McpInstance& inst) {
  check_ref(enc, inst);
  check_length(enc, sample);
  std::vector<std::uint8_t> side(sample.begin(), sample.end());
  DecodedSolution out;
  out.feasible = true;
  out.objective = native::cut_weight(inst, side);
  out.native = McpSolution{std::move(side)};
  return out;
}

Encoded encode(const ProblemInstance& inst) {
  return std::visit(
      [](const auto& i) -> Encoded {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, TspInstance>) return encode_tsp(i);
        else if constexpr (std::is_same_v<T, VrpInstance>) return encode_vrp(i);
        else if constexpr (std::is_same_v<T, BppInstance>) return encode_bpp(i);
        else return encode_mcp(i);
      },
      inst);
}

DecodedSolution decode(const Encoding& enc, const Sample& sample, const ProblemInstance& inst) {
  return std::visit(
      [&](const auto& i) -> DecodedSolution {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, TspInstance>) return decode_tsp(enc, sample, i);
        else if constexpr (std::is_same_v<T, VrpInstance>) return decode_vrp(enc, sample, i);
        else if constexpr (std::is_same_v<T, BppInstance>) return decode_bpp(enc, sample, i);
        else return decode_mcp(enc, sample, i);
      },
      inst);
}

}  // namespace qhybrid
