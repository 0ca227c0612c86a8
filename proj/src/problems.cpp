#include "qhybrid/problems.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "qhybrid/error.hpp"

namespace qhybrid {

using nlohmann::json;

ProblemKind kind_of(const ProblemInstance& inst) {
  return static_cast<ProblemKind>(inst.index());
}

const std::string& name_of(const ProblemInstance& inst) {
  return std::visit([](const auto& i) -> const std::string& { return i.name; }, inst);
}

std::string_view to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::TSP:
      return "tsp";
    case ProblemKind::VRP:
      return "vrp";
    case ProblemKind::BPP:
      return "bpp";
    case ProblemKind::MCP:
      return "mcp";
  }
  return "?";
}

namespace {

void validate_matrix(const Matrix& d, const std::string& what) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].size() != d.size()) throw InstanceError(what + ": distance matrix is not square");
    if (d[i][i] != 0.0) throw InstanceError(what + ": distance matrix diagonal must be zero");
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (!(d[i][j] >= 0.0) || !std::isfinite(d[i][j])) {
        throw InstanceError(what + ": distances must be finite and non-negative");
      }
    }
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d[i][j] != d[j][i]) throw InstanceError(what + ": distance matrix must be symmetric");
    }
  }
}

}  // namespace

void validate(const TspInstance& inst) { validate_matrix(inst.dist, "tsp"); }

void validate(const VrpInstance& inst) {
  validate_matrix(inst.dist, "vrp");
  if (inst.dist.empty()) throw InstanceError("vrp: needs at least the depot");
  if (inst.vehicles == 0) throw InstanceError("vrp: needs at least one vehicle");
  if (inst.demands && inst.demands->size() != inst.n_clients()) {
    throw InstanceError("vrp: one demand per client required");
  }
  if (inst.capacity && !(*inst.capacity > 0.0)) throw InstanceError("vrp: capacity must be positive");
  if (inst.demands) {
    for (double q : *inst.demands) {
      if (!(q >= 0.0)) throw InstanceError("vrp: demands must be non-negative");
      if (inst.capacity && q > *inst.capacity) throw InstanceError("vrp: demand exceeds capacity");
    }
  }
}

void validate(const BppInstance& inst) {
  if (!(inst.capacity > 0.0)) throw InstanceError("bpp: capacity must be positive");
  double total = 0.0;
  for (double w : inst.weights) {
    if (!(w > 0.0)) throw InstanceError("bpp: weights must be positive");
    if (w > inst.capacity) throw InstanceError("bpp: item heavier than bin capacity");
    total += w;
  }
  if (inst.max_bins == 0) throw InstanceError("bpp: max_bins must be positive");
  if (static_cast<double>(inst.max_bins) < std::ceil(total / inst.capacity - 1e-9)) {
    throw InstanceError("bpp: max_bins below the capacity lower bound");
  }
}

void validate(const McpInstance& inst) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const McpEdge& e : inst.edges) {
    if (e.u == e.v) throw InstanceError("mcp: self-loop");
    if (e.u > e.v) throw InstanceError("mcp: edges must be listed with u < v");
    if (e.v >= inst.n) throw InstanceError("mcp: edge endpoint out of range");
    if (!seen.insert({e.u, e.v}).second) throw InstanceError("mcp: duplicate edge");
  }
}

void validate(const ProblemInstance& inst) {
  std::visit([](const auto& i) { validate(i); }, inst);
}

json instance_to_json(const ProblemInstance& inst) {
  json doc;
  std::visit(
      [&](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, TspInstance>) {
          doc = {{"kind", "tsp"}, {"dist", i.dist}};
        } else if constexpr (std::is_same_v<T, VrpInstance>) {
          doc = {{"kind", "vrp"}, {"dist", i.dist}, {"vehicles", i.vehicles}};
          if (i.demands) doc["demands"] = *i.demands;
          if (i.capacity) doc["capacity"] = *i.capacity;
        } else if constexpr (std::is_same_v<T, BppInstance>) {
          doc = {{"kind", "bpp"},
                 {"weights", i.weights},
                 {"capacity", i.capacity},
                 {"max_bins", i.max_bins}};
        } else {
          json edges = json::array();
          for (const McpEdge& e : i.edges) edges.push_back({e.u, e.v, e.weight});
          doc = {{"kind", "mcp"}, {"n", i.n}, {"edges", std::move(edges)}};
        }
        if (!i.name.empty()) doc["name"] = i.name;
      },
      inst);
  return doc;
}

namespace {

template <typename T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw FormatError(std::string("instance lacks \"") + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("instance field \"") + key + "\": " + e.what());
  }
}

}  // namespace

ProblemInstance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("instance document must be an object");
  const auto kind = field<std::string>(doc, "kind");
  const std::string name = doc.value("name", std::string());
  ProblemInstance out;
  if (kind == "tsp") {
    out = TspInstance{name, field<Matrix>(doc, "dist")};
  } else if (kind == "vrp") {
    VrpInstance v;
    v.name = name;
    v.dist = field<Matrix>(doc, "dist");
    v.vehicles = doc.contains("vehicles") ? field<std::size_t>(doc, "vehicles") : 1;
    if (doc.contains("demands")) v.demands = field<std::vector<double>>(doc, "demands");
    if (doc.contains("capacity")) v.capacity = field<double>(doc, "capacity");
    out = std::move(v);
  } else if (kind == "bpp") {
    out = BppInstance{name, field<std::vector<double>>(doc, "weights"),
                      field<double>(doc, "capacity"), field<std::size_t>(doc, "max_bins")};
  } else if (kind == "mcp") {
    McpInstance m;
    m.name = name;
    m.n = field<std::size_t>(doc, "n");
    for (const json& e : field<json>(doc, "edges")) {
      if (!e.is_array() || e.size() != 3) throw FormatError("mcp edge must be [i, j, w]");
      auto u = e[0].get<std::size_t>();
      auto v = e[1].get<std::size_t>();
      m.edges.push_back({u, v, e[2].get<double>()});
    }
    out = std::move(m);
  } else {
    throw FormatError("unknown instance kind '" + kind + "'");
  }
  validate(out);
  return out;
}

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Fills an n x n matrix from an explicit weight list in the given format.
Matrix explicit_matrix(const std::vector<double>& w, std::size_t n, const std::string& format) {
  Matrix d(n, std::vector<double>(n, 0.0));
  std::size_t k = 0;
  auto next = [&]() {
    if (k >= w.size()) throw FormatError("EDGE_WEIGHT_SECTION too short");
    return w[k++];
  };
  auto set = [&](std::size_t i, std::size_t j) {
    const double v = next();
    d[i][j] = v;
    d[j][i] = v;
  };
  if (format == "FULL_MATRIX") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = next();
  } else if (format == "UPPER_ROW") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) set(i, j);
  } else if (format == "LOWER_ROW") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) set(i, j);
  } else if (format == "UPPER_DIAG_ROW") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) set(i, j);
  } else if (format == "LOWER_DIAG_ROW") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) set(i, j);
  } else {
    throw FormatError("unsupported EDGE_WEIGHT_FORMAT '" + format + "'");
  }
  return d;
}

}  // namespace

ProblemInstance parse_tsplib(const std::string& text, bool keep_capacity) {
  std::map<std::string, std::string> spec;
  std::vector<std::pair<double, double>> coords;
  std::vector<double> weights;
  std::vector<double> demands;
  std::vector<long> depots;

  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line == "EOF") break;
    const auto colon = line.find(':');
    const bool is_section = line.find("_SECTION") != std::string::npos && colon == std::string::npos;
    if (is_section) {
      section = line;
      continue;
    }
    if (colon != std::string::npos && std::isalpha(static_cast<unsigned char>(line[0]))) {
      spec[trim(line.substr(0, colon))] = trim(line.substr(colon + 1));
      section.clear();
      if (spec.count("DIMENSION")) dim = std::stoul(spec["DIMENSION"]);
      continue;
    }
    std::istringstream row(line);
    if (section == "NODE_COORD_SECTION") {
      long id;
      double x, y;
      if (!(row >> id >> x >> y)) throw FormatError("bad NODE_COORD_SECTION line: " + line);
      coords.emplace_back(x, y);
    } else if (section == "EDGE_WEIGHT_SECTION") {
      double v;
      while (row >> v) weights.push_back(v);
    } else if (section == "DEMAND_SECTION") {
      long id;
      double q;
      if (!(row >> id >> q)) throw FormatError("bad DEMAND_SECTION line: " + line);
      demands.push_back(q);
    } else if (section == "DEPOT_SECTION") {
      long id;
      while (row >> id) {
        if (id >= 0) depots.push_back(id);
      }
    } else {
      throw FormatError("unexpected TSPLIB line: " + line);
    }
  }
  if (dim == 0) throw FormatError("TSPLIB file lacks DIMENSION");

  const std::string type = spec.count("TYPE") ? spec["TYPE"] : "TSP";
  const std::string ewt = spec.count("EDGE_WEIGHT_TYPE") ? spec["EDGE_WEIGHT_TYPE"] : "EXPLICIT";
  Matrix d;
  if (ewt == "EUC_2D") {
    if (coords.size() != dim) throw FormatError("NODE_COORD_SECTION size != DIMENSION");
    d.assign(dim, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        if (i == j) continue;
        const double dx = coords[i].first - coords[j].first;
        const double dy = coords[i].second - coords[j].second;
        d[i][j] = std::floor(std::sqrt(dx * dx + dy * dy) + 0.5);  // TSPLIB nint
      }
    }
  } else if (ewt == "EXPLICIT") {
    const std::string fmt = spec.count("EDGE_WEIGHT_FORMAT") ? spec["EDGE_WEIGHT_FORMAT"] : "FULL_MATRIX";
    d = explicit_matrix(weights, dim, fmt);
  } else {
    throw FormatError("unsupported EDGE_WEIGHT_TYPE '" + ewt + "'");
  }
  const std::string name = spec.count("NAME") ? spec["NAME"] : std::string();

  ProblemInstance out;
  if (type == "TSP") {
    out = TspInstance{name, std::move(d)};
  } else if (type == "CVRP" || type == "VRP") {
    // Move the depot to index 0.
    std::size_t depot = depots.empty() ? 0 : static_cast<std::size_t>(depots.front() - 1);
    if (depot >= dim) throw FormatError("DEPOT_SECTION refers to a missing node");
    std::vector<std::size_t> order{depot};
    for (std::size_t i = 0; i < dim; ++i)
      if (i != depot) order.push_back(i);
    Matrix r(dim, std::vector<double>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) r[i][j] = d[order[i]][order[j]];

    VrpInstance v;
    v.name = name;
    v.dist = std::move(r);
    v.vehicles = 1;
    if (spec.count("VEHICLES")) {
      v.vehicles = std::stoul(spec["VEHICLES"]);
    } else {
      std::smatch m;
      static const std::regex k_suffix(R"(-k(\d+))");
      if (std::regex_search(name, m, k_suffix)) v.vehicles = std::stoul(m[1]);
    }
    if (keep_capacity && spec.count("CAPACITY") && demands.size() == dim) {
      v.capacity = std::stod(spec["CAPACITY"]);
      std::vector<double> q;
      for (std::size_t i = 1; i < dim; ++i) q.push_back(demands[order[i]]);
      v.demands = std::move(q);
    }
    out = std::move(v);
  } else {
    throw FormatError("unsupported TSPLIB TYPE '" + type + "'");
  }
  validate(out);
  return out;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ProblemInstance load_instance(const std::string& path, bool keep_capacity) {
  const std::filesystem::path p(path);
  const std::string text = read_file(path);
  ProblemInstance inst;
  if (p.extension() == ".json") {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw FormatError(path + ": " + e.what());
    }
    inst = instance_from_json(doc);
  } else {
    inst = parse_tsplib(text, keep_capacity);
  }
  std::visit(
      [&](auto& i) {
        if (i.name.empty()) i.name = p.stem().string();
      },
      inst);
  return inst;
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << instance_to_json(inst).dump() << '\n';
}

std::uint64_t instance_fingerprint(const ProblemInstance& inst) {
  json doc = instance_to_json(inst);
  doc.erase("name");
  const std::string s = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qhybrid
