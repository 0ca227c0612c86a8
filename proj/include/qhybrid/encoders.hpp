#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qhybrid/native.hpp"
#include "qhybrid/problems.hpp"
#include "qhybrid/qubo.hpp"

namespace qhybrid {

// Semantic meaning of one QUBO variable.
//   TSP  'x' (node, position)
//   VRP  'x' (client node, route, position)   's' (route, bit)
//   BPP  'y' (bin)  'x' (item, bin)           's' (bin, bit)
//   MCP  'x' (node)
struct VarSlot {
  char kind = 'x';
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t c = 0;
  friend auto operator<=>(const VarSlot&, const VarSlot&) = default;
};

class Encoding {
 public:
  Encoding() = default;
  Encoding(ProblemKind kind, std::vector<VarSlot> slots, std::map<std::string, double> penalties,
           std::uint64_t instance_ref, double objective_scale, double objective_constant);

  ProblemKind problem_kind() const noexcept { return kind_; }
  std::size_t num_variables() const noexcept { return slots_.size(); }
  const VarSlot& slot(VarIndex i) const;
  // IndexError when the slot is not part of this encoding.
  VarIndex index(const VarSlot& s) const;
  std::optional<VarIndex> find(const VarSlot& s) const;

  const std::map<std::string, double>& penalties() const noexcept { return penalties_; }
  std::uint64_t instance_ref() const noexcept { return instance_ref_; }

  // For feasible samples: energy == objective_scale * objective + objective_constant.
  double objective_scale() const noexcept { return scale_; }
  double objective_constant() const noexcept { return constant_; }

 private:
  ProblemKind kind_ = ProblemKind::TSP;
  std::vector<VarSlot> slots_;
  std::map<VarSlot, VarIndex> index_;
  std::map<std::string, double> penalties_;
  std::uint64_t instance_ref_ = 0;
  double scale_ = 1.0;
  double constant_ = 0.0;
};

struct TspSolution {
  native::Route tour;
};
struct VrpSolution {
  std::vector<native::Route> routes;  // one per vehicle, possibly empty
};
struct BppSolution {
  std::vector<std::size_t> bin_of_item;
};
struct McpSolution {
  std::vector<std::uint8_t> side;
};
using NativeSolution = std::variant<TspSolution, VrpSolution, BppSolution, McpSolution>;

struct DecodedSolution {
  bool feasible = false;
  std::optional<NativeSolution> native;
  // Present iff feasible, in the instance's own units.
  std::optional<double> objective;
};

struct Encoded {
  QuboModel model;
  Encoding encoding;
};

// Position encoding x_{v,p}, index v*n + p. Row and column one-hot penalties
// with A = n * max(dist) + 1.
Encoded encode_tsp(const TspInstance& inst);
DecodedSolution decode_tsp(const Encoding& enc, const Sample& sample, const TspInstance& inst);

// Multi-route position encoding x_{v,r,p}, p < n_clients. Penalties:
//   one_hot     A  (sum_{r,p} x_{v,r,p} - 1)^2 per client
//   slot        A2 sum_{v<w} x_{v,r,p} x_{w,r,p} per slot
//   contiguity  A  s_{r,p+1} (1 - s_{r,p}),  s_{r,p} = sum_v x_{v,r,p}
//   capacity    A  (sum demand*x + slack - capacity)^2 per route (optional)
// with A = (n_clients+1) * max(dist) + 1 and A2 = A + n_clients * (A + max(dist)).
// Routes fill their positions from 0 without gaps; unused routes stay empty.
Encoded encode_vrp(const VrpInstance& inst);
DecodedSolution decode_vrp(const Encoding& enc, const Sample& sample, const VrpInstance& inst);

// y_b, x_{i,b} and ceil(log2(capacity+1)) slack bits per bin; objective sum y_b.
// Weights and capacity must be integral.
Encoded encode_bpp(const BppInstance& inst);
DecodedSolution decode_bpp(const Encoding& enc, const Sample& sample, const BppInstance& inst);

// -sum w (x_i + x_j - 2 x_i x_j): energy is the negated cut weight.
Encoded encode_mcp(const McpInstance& inst);
DecodedSolution decode_mcp(const Encoding& enc, const Sample& sample, const McpInstance& inst);

Encoded encode(const ProblemInstance& inst);
// ConfigError if the encoding does not belong to the instance.
DecodedSolution decode(const Encoding& enc, const Sample& sample, const ProblemInstance& inst);

}  // namespace qhybrid
