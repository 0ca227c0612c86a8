#include "qhybrid/remote.hpp"

#include <cmath>
#include <regex>

#include "httplib.h"
#include "json.hpp"
#include "qhybrid/error.hpp"
#include "qhybrid/qubo_json.hpp"

namespace qhybrid {

namespace {

struct Endpoint {
  std::string host;
  int port = 80;
  std::string path;  // full request path, ends in /sample
};

Endpoint parse_endpoint(const std::string& url) {
  static const std::regex re(R"(^(\w+)://([^/:]+)(?::(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ConfigError("malformed endpoint URL '" + url + "'");
  if (m[1] != "http") throw ConfigError("only http:// endpoints are supported: '" + url + "'");
  Endpoint ep;
  ep.host = m[2];
  if (m[3].matched) ep.port = std::stoi(m[3]);
  std::string prefix = m[4].matched ? std::string(m[4]) : std::string();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  ep.path = prefix + "/sample";
  return ep;
}

void configure(httplib::Client& cli, const RemoteSamplerConfig& cfg) {
  if (cfg.timeout_ms == 0) throw ConfigError("remote timeout must be positive");
  const auto sec = static_cast<time_t>(cfg.timeout_ms / 1000);
  const auto usec = static_cast<time_t>((cfg.timeout_ms % 1000) * 1000);
  cli.set_connection_timeout(sec, usec);
  cli.set_read_timeout(sec, usec);
  cli.set_write_timeout(sec, usec);
  cli.set_keep_alive(true);
  if (cfg.auth_token) cli.set_bearer_token_auth(*cfg.auth_token);
}

SampleSet parse_reply(const QuboModel& model, const std::string& body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("remote reply is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array()) {
    throw ProtocolError("remote reply lacks a \"samples\" array");
  }
  const std::size_t n = model.num_variables();
  std::vector<SampleRecord> records;
  std::size_t mismatches = 0;
  for (const auto& entry : doc["samples"]) {
    if (!entry.is_object() || !entry.contains("bits") || !entry["bits"].is_array()) {
      throw ProtocolError("remote sample lacks a \"bits\" array");
    }
    const auto& bits = entry["bits"];
    if (bits.size() != n) throw ProtocolError("remote sample has the wrong length");
    Sample s(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!bits[i].is_number_integer() || (bits[i] != 0 && bits[i] != 1)) {
        throw ProtocolError("remote sample bits must be 0 or 1");
      }
      s[i] = static_cast<std::uint8_t>(bits[i].get<int>());
    }
    std::uint64_t occ = 1;
    if (entry.contains("occurrences")) {
      const auto& o = entry["occurrences"];
      if (!o.is_number_integer() || o.get<long long>() < 1) {
        throw ProtocolError("remote occurrences must be a positive integer");
      }
      occ = o.get<std::uint64_t>();
    }
    SampleRecord rec(model, std::move(s), occ);
    if (entry.contains("energy")) {
      if (!entry["energy"].is_number()) throw ProtocolError("remote energy must be a number");
      if (std::abs(entry["energy"].get<double>() - rec.energy()) > kRemoteEnergyTolerance) {
        ++mismatches;
      }
    }
    records.push_back(std::move(rec));
  }
  SampleSet out(model, std::move(records));
  out.info()["energy_mismatch"] = mismatches > 0 ? "true" : "false";
  out.info()["energy_mismatches"] = std::to_string(mismatches);
  return out;
}

SampleSet post(httplib::Client& cli, const Endpoint& ep, const QuboModel& model,
               std::size_t num_reads) {
  nlohmann::json payload = qubo_to_json(model);
  payload["num_reads"] = num_reads;
  auto res = cli.Post(ep.path, payload.dump(), "application/json");
  if (!res) {
    throw TransportError("remote sampler unreachable: " + httplib::to_string(res.error()),
                         true);
  }
  if (res->status >= 500) {
    throw TransportError("remote sampler returned HTTP " + std::to_string(res->status), true);
  }
  if (res->status != 200) {
    throw ProtocolError("remote sampler returned HTTP " + std::to_string(res->status));
  }
  return parse_reply(model, res->body);
}

}  // namespace

SampleSet remote_sample(const RemoteSamplerConfig& cfg, const QuboModel& model,
                        std::size_t num_reads) {
  const Endpoint ep = parse_endpoint(cfg.endpoint);
  httplib::Client cli(ep.host, ep.port);
  configure(cli, cfg);
  return post(cli, ep, model, num_reads);
}

struct RemoteBackend::Pool {
  Endpoint ep;
  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::unique_ptr<httplib::Client>> idle;
  std::size_t open = 0;
};

RemoteBackend::RemoteBackend(RemoteSamplerConfig cfg)
    : cfg_(std::move(cfg)), pool_(std::make_unique<Pool>()) {
  pool_->ep = parse_endpoint(cfg_.endpoint);
  if (cfg_.timeout_ms == 0) throw ConfigError("remote timeout must be positive");
  if (cfg_.max_connections == 0) throw ConfigError("remote pool needs at least one connection");
}

RemoteBackend::~RemoteBackend() = default;

SampleSet RemoteBackend::sample(const QuboModel& model) const {
  std::unique_ptr<httplib::Client> cli;
  {
    std::unique_lock lock(pool_->mu);
    pool_->cv.wait(lock, [&] { return !pool_->idle.empty() || pool_->open < cfg_.max_connections; });
    if (!pool_->idle.empty()) {
      cli = std::move(pool_->idle.back());
      pool_->idle.pop_back();
    } else {
      ++pool_->open;
    }
  }
  if (!cli) {
    cli = std::make_unique<httplib::Client>(pool_->ep.host, pool_->ep.port);
    configure(*cli, cfg_);
  }
  auto give_back = [&] {
    std::lock_guard lock(pool_->mu);
    pool_->idle.push_back(std::move(cli));
    pool_->cv.notify_one();
  };
  try {
    SampleSet out = post(*cli, pool_->ep, model, cfg_.num_reads);
    give_back();
    return out;
  } catch (...) {
    give_back();
    throw;
  }
}

}  // namespace qhybrid
