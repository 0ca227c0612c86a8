#include "qhybrid/qubo_json.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qhybrid/error.hpp"

namespace qhybrid {

using nlohmann::json;

json qubo_to_json(const QuboModel& model) {
  json lin = json::array();
  for (const LinearTerm& t : model.linear_terms()) lin.push_back({t.var, t.coeff});
  json quad = json::array();
  for (const QuadTerm& t : model.quadratic_terms()) {
    quad.push_back({t.first, t.second, t.coeff});
  }
  return json{{"n", model.num_variables()},
              {"linear", std::move(lin)},
              {"quadratic", std::move(quad)},
              {"offset", model.offset()}};
}

namespace {

std::size_t index_field(const json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw FormatError(std::string("QUBO ") + what + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double coeff_field(const json& v) {
  if (!v.is_number()) throw FormatError("QUBO coefficient must be a number");
  return v.get<double>();
}

}  // namespace

QuboModel qubo_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("n")) {
    throw FormatError("QUBO document must be an object with an \"n\" field");
  }
  const std::size_t n = index_field(doc.at("n"), "n");
  QuboBuilder b(n);
  if (doc.contains("offset")) b.add_offset(coeff_field(doc.at("offset")));

  std::set<std::size_t> seen_lin;
  if (doc.contains("linear")) {
    for (const json& e : doc.at("linear")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("linear entry must be [i, c]");
      std::size_t i = index_field(e[0], "index");
      if (i >= n) throw FormatError("linear index out of range");
      if (!seen_lin.insert(i).second) throw FormatError("repeated linear index");
      b.add_linear(i, coeff_field(e[1]));
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> seen_quad;
  if (doc.contains("quadratic")) {
    for (const json& e : doc.at("quadratic")) {
      if (!e.is_array() || e.size() != 3) throw FormatError("quadratic entry must be [i, j, c]");
      std::size_t i = index_field(e[0], "index");
      std::size_t j = index_field(e[1], "index");
      if (i >= j) throw FormatError("quadratic entry requires i < j");
      if (j >= n) throw FormatError("quadratic index out of range");
      if (!seen_quad.insert({i, j}).second) throw FormatError("repeated quadratic key");
      b.add_quadratic(i, j, coeff_field(e[2]));
    }
  }
  return b.build();
}

std::string dump_qubo(const QuboModel& model) { return qubo_to_json(model).dump(); }

QuboModel parse_qubo(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid QUBO JSON: ") + e.what());
  }
  return qubo_from_json(doc);
}

QuboModel load_qubo_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_qubo(ss.str());
}

void save_qubo_file(const QuboModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << qubo_to_json(model).dump(2) << '\n';
}

}  // namespace qhybrid
