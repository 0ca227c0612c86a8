#pragma once

#include <string>

#include "json.hpp"
#include "qhybrid/qubo.hpp"

namespace qhybrid {

// {"n": int, "linear": [[i, c], ...], "quadratic": [[i, j, c], ...], "offset": c}
//
// Only non-zero terms are written, in canonical order. Coefficients are
// written with round-trip precision so load(dump(m)) == m bit for bit.
nlohmann::json qubo_to_json(const QuboModel& model);

// Rejects quadratic entries with i >= j, out-of-range indices and repeated
// keys with FormatError.
QuboModel qubo_from_json(const nlohmann::json& doc);

std::string dump_qubo(const QuboModel& model);
QuboModel parse_qubo(const std::string& text);

QuboModel load_qubo_file(const std::string& path);
void save_qubo_file(const QuboModel& model, const std::string& path);

}  // namespace qhybrid
