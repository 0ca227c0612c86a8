#include "qhybrid/native.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "qhybrid/error.hpp"

namespace qhybrid::native {

double tour_length(const Matrix& dist, const Route& tour) {
  if (tour.empty()) return 0.0;
  double len = 0.0;
  for (std::size_t k = 0; k < tour.size(); ++k) {
    len += dist[tour[k]][tour[(k + 1) % tour.size()]];
  }
  return len;
}

double routes_length(const Matrix& dist, const std::vector<Route>& routes) {
  double len = 0.0;
  for (const Route& r : routes) {
    if (r.empty()) continue;
    len += dist[0][r.front()];
    for (std::size_t k = 0; k + 1 < r.size(); ++k) len += dist[r[k]][r[k + 1]];
    len += dist[r.back()][0];
  }
  return len;
}

std::size_t bins_used(const std::vector<std::size_t>& bin_of_item) {
  std::vector<std::size_t> b = bin_of_item;
  std::sort(b.begin(), b.end());
  return static_cast<std::size_t>(std::unique(b.begin(), b.end()) - b.begin());
}

bool bins_respect_capacity(const BppInstance& inst, const std::vector<std::size_t>& bin_of_item) {
  std::vector<double> load;
  for (std::size_t i = 0; i < bin_of_item.size(); ++i) {
    if (bin_of_item[i] >= load.size()) load.resize(bin_of_item[i] + 1, 0.0);
    load[bin_of_item[i]] += inst.weights[i];
  }
  return std::all_of(load.begin(), load.end(), [&](double l) { return l <= inst.capacity; });
}

double cut_weight(const McpInstance& inst, const std::vector<std::uint8_t>& side) {
  double w = 0.0;
  for (const McpEdge& e : inst.edges) {
    if (side[e.u] != side[e.v]) w += e.weight;
  }
  return w;
}

double tsp_optimum(const TspInstance& inst) {
  const std::size_t n = inst.size();
  if (n > 10) throw CapacityError("tsp brute force limited to 10 nodes");
  if (n == 0) return 0.0;
  Route tour(n);
  std::iota(tour.begin(), tour.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, tour_length(inst.dist, tour));
  } while (std::next_permutation(tour.begin() + 1, tour.end()));
  return best;
}

namespace {

// Shortest depot-closed route through exactly the clients in `mask`
// (bit c-1 = client c), by permutation.
double best_route(const Matrix& dist, std::uint32_t mask) {
  Route r;
  for (std::size_t c = 1; c < dist.size(); ++c) {
    if (mask & (1U << (c - 1))) r.push_back(c);
  }
  if (r.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, routes_length(dist, {r}));
  } while (std::next_permutation(r.begin(), r.end()));
  return best;
}

}  // namespace

double vrp_optimum(const VrpInstance& inst) {
  const std::size_t c = inst.n_clients();
  if (c > 8) throw CapacityError("vrp brute force limited to 8 clients");
  const std::size_t k = inst.vehicles;
  const std::uint32_t full = (1U << c) - 1;
  std::vector<double> route_cost(full + 1);
  std::vector<bool> route_ok(full + 1, true);
  for (std::uint32_t m = 0; m <= full; ++m) {
    route_cost[m] = best_route(inst.dist, m);
    if (inst.capacity && inst.demands) {
      double load = 0.0;
      for (std::size_t j = 0; j < c; ++j)
        if (m & (1U << j)) load += (*inst.demands)[j];
      route_ok[m] = load <= *inst.capacity;
    }
  }
  // Enumerate client -> vehicle assignments (k^c).
  std::vector<std::size_t> veh(c, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::uint32_t> masks(k, 0);
    for (std::size_t j = 0; j < c; ++j) masks[veh[j]] |= (1U << j);
    double total = 0.0;
    bool ok = true;
    for (std::uint32_t m : masks) {
      ok = ok && route_ok[m];
      total += route_cost[m];
    }
    if (ok) best = std::min(best, total);
    std::size_t j = 0;
    while (j < c && ++veh[j] == k) veh[j++] = 0;
    if (j == c) break;
  }
  return best;
}

double bpp_optimum(const BppInstance& inst) {
  const std::size_t items = inst.weights.size();
  if (items > 10) throw CapacityError("bpp brute force limited to 10 items");
  if (items == 0) return 0.0;
  std::vector<std::size_t> bin(items, 0);
  std::size_t best = items;
  while (true) {
    if (bins_respect_capacity(inst, bin)) best = std::min(best, bins_used(bin));
    std::size_t j = 0;
    while (j < items && ++bin[j] == items) bin[j++] = 0;
    if (j == items) break;
  }
  return static_cast<double>(best);
}

double mcp_optimum(const McpInstance& inst) {
  if (inst.n > 24) throw CapacityError("maxcut brute force limited to 24 nodes");
  double best = 0.0;
  std::vector<std::uint8_t> side(inst.n);
  for (std::uint32_t m = 0; m < (1U << inst.n); ++m) {
    for (std::size_t i = 0; i < inst.n; ++i) side[i] = (m >> i) & 1U;
    best = std::max(best, cut_weight(inst, side));
  }
  return best;
}

double optimum(const ProblemInstance& inst) {
  return std::visit(
      [](const auto& i) -> double {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, TspInstance>) return tsp_optimum(i);
        else if constexpr (std::is_same_v<T, VrpInstance>) return vrp_optimum(i);
        else if constexpr (std::is_same_v<T, BppInstance>) return bpp_optimum(i);
        else return mcp_optimum(i);
      },
      inst);
}

}  // namespace qhybrid::native
