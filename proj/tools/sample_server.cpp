#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "qhybrid/backend.hpp"
#include "qhybrid/error.hpp"
#include "qhybrid/heuristics.hpp"
#include "qhybrid/qubo_json.hpp"

using nlohmann::json;
using namespace qhybrid;

// Minimal sampler service speaking the remote backend protocol:
//   POST <prefix>/sample  {QUBO JSON..., "num_reads": k}
//   -> {"samples": [{"bits": [...], "energy": e, "occurrences": 1}, ...]}
int main(int argc, char** argv) {
  CLI::App app{"QUBO sampling service"};
  std::string host = "127.0.0.1", mode = "anneal";
  int port = 8080;
  std::uint64_t seed = 0;
  app.add_option("--host", host, "bind address");
  app.add_option("--port", port, "port");
  app.add_option("--mode", mode, "exact or anneal")->check(CLI::IsMember({"exact", "anneal"}));
  app.add_option("--seed", seed, "annealer seed");
  CLI11_PARSE(app, argc, argv);

  httplib::Server server;
  server.Post("/sample", [&](const httplib::Request& req, httplib::Response& res) {
    try {
      json doc = json::parse(req.body);
      const std::size_t reads = doc.value("num_reads", std::size_t{1});
      doc.erase("num_reads");
      const QuboModel model = qubo_from_json(doc);
      SampleSet set(model);
      if (mode == "exact") {
        set = ExactBackend().sample(model);
      } else {
        SaConfig cfg;
        cfg.num_reads = reads;
        cfg.seed = seed;
        set = sa_sample(model, cfg);
      }
      json samples = json::array();
      for (const SampleRecord& r : set.records()) {
        samples.push_back(
            {{"bits", r.sample()}, {"energy", r.energy()}, {"occurrences", r.occurrences()}});
      }
      res.set_content(json{{"samples", samples}}.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    }
  });
  std::cerr << "listening on " << host << ':' << port << '\n';
  return server.listen(host, port) ? 0 : 1;
}
