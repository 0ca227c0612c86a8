#include "qhybrid/registry.hpp"

#include "qhybrid/error.hpp"

namespace qhybrid {

const std::vector<SolverTag>& solver_registry() {
  static const std::vector<SolverTag> tags = {
      {"qbsolv", HybridClass::CooperativeImbrication, Role::Classical, Role::Quantum},
      // Branches share the incumbent, so neither side owns either phase.
      {"kerberos", HybridClass::CooperativeImbrication, Role::Shared, Role::Shared},
      {"hss", HybridClass::CooperativeImbrication, Role::Classical, Role::Quantum},
      // Roles swapped: quantum primals explore, branch-and-bound exploits.
      {"qhs", HybridClass::CooperativeImbrication, Role::Quantum, Role::Classical},
  };
  return tags;
}

const SolverTag& registry_lookup(std::string_view name) {
  for (const SolverTag& t : solver_registry()) {
    if (t.name == name) return t;
  }
  throw ConfigError("unknown solver '" + std::string(name) + "'");
}

std::string_view to_string(HybridClass c) {
  switch (c) {
    case HybridClass::CooperativeParameterOptimization:
      return "Cooperative - Parameter Optimization";
    case HybridClass::CooperativeImbrication:
      return "Cooperative - Imbrication";
  }
  return "?";
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::Classical:
      return "classical";
    case Role::Quantum:
      return "quantum";
    case Role::Shared:
      return "shared";
  }
  return "?";
}

}  // namespace qhybrid
