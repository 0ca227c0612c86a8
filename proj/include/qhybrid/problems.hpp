#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qhybrid {

using Matrix = std::vector<std::vector<double>>;

struct TspInstance {
  std::string name;
  Matrix dist;  // square, zero diagonal, symmetric
  std::size_t size() const noexcept { return dist.size(); }
};

// Node 0 is the depot; clients are nodes 1..n_clients.
struct VrpInstance {
  std::string name;
  Matrix dist;
  std::size_t vehicles = 1;
  // Per client (index 0 = node 1). Capacity is enforced only when both are set.
  std::optional<std::vector<double>> demands;
  std::optional<double> capacity;
  std::size_t n_clients() const noexcept { return dist.empty() ? 0 : dist.size() - 1; }
};

struct BppInstance {
  std::string name;
  std::vector<double> weights;
  double capacity = 0.0;
  std::size_t max_bins = 0;
};

struct McpEdge {
  std::size_t u;
  std::size_t v;
  double weight;
  friend bool operator==(const McpEdge&, const McpEdge&) = default;
};

struct McpInstance {
  std::string name;
  std::size_t n = 0;
  std::vector<McpEdge> edges;  // u < v, no duplicates
};

using ProblemInstance = std::variant<TspInstance, VrpInstance, BppInstance, McpInstance>;

enum class ProblemKind { TSP, VRP, BPP, MCP };

ProblemKind kind_of(const ProblemInstance& inst);
const std::string& name_of(const ProblemInstance& inst);
std::string_view to_string(ProblemKind k);

// Throw InstanceError when a type invariant does not hold.
void validate(const TspInstance& inst);
void validate(const VrpInstance& inst);
void validate(const BppInstance& inst);
void validate(const McpInstance& inst);
void validate(const ProblemInstance& inst);

// Instance JSON:
//   {"kind":"tsp","dist":[[...]]}
//   {"kind":"vrp","dist":[[...]],"vehicles":k,"demands":[...],"capacity":c}
//   {"kind":"bpp","weights":[...],"capacity":c,"max_bins":m}
//   {"kind":"mcp","n":n,"edges":[[i,j,w],...]}
// An optional "name" field is carried through.
nlohmann::json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& doc);

// Reads TSPLIB files (TYPE: TSP or CVRP, EDGE_WEIGHT_TYPE EXPLICIT or EUC_2D).
// CVRP vehicle count comes from a VEHICLES: entry or a "-k<N>" name suffix
// (default 1); demands/capacity are kept only when `keep_capacity` is true.
ProblemInstance parse_tsplib(const std::string& text, bool keep_capacity = false);

// Dispatches on extension: .json -> instance JSON, anything else -> TSPLIB.
// The instance name defaults to the file stem.
ProblemInstance load_instance(const std::string& path, bool keep_capacity = false);
void save_instance(const ProblemInstance& inst, const std::string& path);

// Content hash of the canonical instance JSON (name excluded).
std::uint64_t instance_fingerprint(const ProblemInstance& inst);

}  // namespace qhybrid
