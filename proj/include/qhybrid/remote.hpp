#pragma once

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qhybrid/backend.hpp"

namespace httplib {
class Client;
}

namespace qhybrid {

struct RemoteSamplerConfig {
  // http://host:port[/prefix]; requests go to <prefix>/sample.
  std::string endpoint;
  std::uint64_t timeout_ms = 10000;
  std::size_t num_reads = 10;
  std::optional<std::string> auth_token;
  std::size_t max_connections = 4;
};

// Energy disagreement above which a remote record is flagged.
inline constexpr double kRemoteEnergyTolerance = 1e-6;

// POSTs the QUBO JSON (plus "num_reads") and parses
//   {"samples": [{"bits": [...], "energy": e, "occurrences": k}, ...]}
// Energies are recomputed locally; records whose reported energy differs by
// more than kRemoteEnergyTolerance are counted in info()["energy_mismatches"]
// and info()["energy_mismatch"] is set to "true".
//
// Errors: TransportError (retryable) on connect failure, timeout or 5xx;
// ProtocolError on other HTTP statuses or a malformed payload.
SampleSet remote_sample(const RemoteSamplerConfig& cfg, const QuboModel& model,
                        std::size_t num_reads);

// Pooled remote backend. Each pooled connection serves one request at a
// time; callers beyond max_connections wait for a free one.
class RemoteBackend final : public SamplerBackend {
 public:
  explicit RemoteBackend(RemoteSamplerConfig cfg);
  ~RemoteBackend() override;

  std::string name() const override { return "remote:" + cfg_.endpoint; }
  BackendCapability capability() const override { return {std::nullopt, false}; }
  SampleSet sample(const QuboModel& model) const override;

 private:
  struct Pool;
  RemoteSamplerConfig cfg_;
  std::unique_ptr<Pool> pool_;
};

}  // namespace qhybrid
