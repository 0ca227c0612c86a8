#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qhybrid/problems.hpp"

// Objective evaluators and brute-force optima in the problems' own terms.
// Nothing here touches QUBO code; these are the references the encoders and
// solvers are checked against.
namespace qhybrid::native {

using Route = std::vector<std::size_t>;

// Closed tour length over the node sequence (returns to tour[0]).
double tour_length(const Matrix& dist, const Route& tour);

// Sum of depot -> clients -> depot lengths; node ids index `dist`, 0 is the
// depot; empty routes cost nothing.
double routes_length(const Matrix& dist, const std::vector<Route>& routes);

// Number of distinct bins used by the assignment item -> bin.
std::size_t bins_used(const std::vector<std::size_t>& bin_of_item);
bool bins_respect_capacity(const BppInstance& inst, const std::vector<std::size_t>& bin_of_item);

// Total weight of edges whose endpoints lie on different sides.
double cut_weight(const McpInstance& inst, const std::vector<std::uint8_t>& side);

// Brute-force optima: tour permutations (n <= 10), client-to-route
// assignments with per-route permutations (clients <= 8), item-to-bin
// assignments (items <= 10) and all 2^n partitions (n <= 24).
double tsp_optimum(const TspInstance& inst);
double vrp_optimum(const VrpInstance& inst);
double bpp_optimum(const BppInstance& inst);
double mcp_optimum(const McpInstance& inst);
double optimum(const ProblemInstance& inst);

}  // namespace qhybrid::native
