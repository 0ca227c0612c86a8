#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qhybrid {

enum class HybridClass { CooperativeParameterOptimization, CooperativeImbrication };
enum class Role { Classical, Quantum, Shared };

// Taxonomy entry of a hybrid workflow: how the quantum and classical parts
// cooperate and which of them drives exploration and exploitation.
struct SolverTag {
  std::string name;
  HybridClass classification;
  Role exploration;
  Role exploitation;
  friend bool operator==(const SolverTag&, const SolverTag&) = default;
};

// Tags of the built-in workflows: qbsolv, kerberos, hss, qhs.
const std::vector<SolverTag>& solver_registry();

// Throws ConfigError for unknown names.
const SolverTag& registry_lookup(std::string_view name);

std::string_view to_string(HybridClass c);
std::string_view to_string(Role r);

}  // namespace qhybrid
