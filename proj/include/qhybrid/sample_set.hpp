#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qhybrid/qubo.hpp"

namespace qhybrid {

// A sample together with its energy. The energy is always computed locally
// from the model at construction, so a record can never carry a stale or
// externally reported value.
class SampleRecord {
 public:
  SampleRecord(const QuboModel& model, Sample sample, std::uint64_t occurrences = 1);

  const Sample& sample() const noexcept { return sample_; }
  double energy() const noexcept { return energy_; }
  std::uint64_t occurrences() const noexcept { return occurrences_; }

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;

 private:
  Sample sample_;
  double energy_;
  std::uint64_t occurrences_;
};

// Total order used everywhere candidates are ranked: energy ascending, ties
// broken by bit-lexicographic order.
bool record_less(const SampleRecord& a, const SampleRecord& b);

// Energy-sorted collection of records produced from one model.
class SampleSet {
 public:
  explicit SampleSet(const QuboModel& model);
  SampleSet(const QuboModel& model, std::vector<SampleRecord> records);

  const std::vector<SampleRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const SampleRecord& best() const;
  std::uint64_t model_fingerprint() const noexcept { return fingerprint_; }

  // Appends the other set's records; both sets must come from the same model.
  void merge(const SampleSet& other);

  // Free-form annotations from the producing backend (e.g. the remote
  // sampler flags energy mismatches here).
  std::map<std::string, std::string>& info() noexcept { return info_; }
  const std::map<std::string, std::string>& info() const noexcept { return info_; }

  friend bool operator==(const SampleSet& a, const SampleSet& b) {
    return a.fingerprint_ == b.fingerprint_ && a.records_ == b.records_;
  }

 private:
  void sort();

  std::vector<SampleRecord> records_;
  std::uint64_t fingerprint_;
  std::map<std::string, std::string> info_;
};

}  // namespace qhybrid
