#include "qhybrid/sample_set.hpp"

#include <algorithm>

#include "qhybrid/error.hpp"

namespace qhybrid {

SampleRecord::SampleRecord(const QuboModel& model, Sample sample,
                           std::uint64_t occurrences)
    : sample_(std::move(sample)), energy_(qhybrid::energy(model, sample_)),
      occurrences_(occurrences) {
  if (occurrences_ == 0) throw ConfigError("sample occurrences must be positive");
  for (std::uint8_t b : sample_) {
    if (b > 1) throw FormatError("sample bits must be 0 or 1");
  }
}

bool record_less(const SampleRecord& a, const SampleRecord& b) {
  if (a.energy() != b.energy()) return a.energy() < b.energy();
  return bits_less(a.sample(), b.sample());
}

SampleSet::SampleSet(const QuboModel& model) : fingerprint_(fingerprint(model)) {}

SampleSet::SampleSet(const QuboModel& model, std::vector<SampleRecord> records)
    : records_(std::move(records)), fingerprint_(fingerprint(model)) {
  for (const SampleRecord& r : records_) {
    if (r.sample().size() != model.num_variables()) {
      throw DimensionError("record length does not match model");
    }
  }
  sort();
}

const SampleRecord& SampleSet::best() const {
  if (records_.empty()) throw Error("empty sample set has no best record");
  return records_.front();
}

void SampleSet::merge(const SampleSet& other) {
  if (other.fingerprint_ != fingerprint_) {
    throw ConfigError("cannot merge sample sets from different models");
  }
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
  sort();
  for (const auto& [k, v] : other.info_) info_.insert_or_assign(k, v);
}

void SampleSet::sort() { std::stable_sort(records_.begin(), records_.end(), record_less); }

}  // namespace qhybrid
