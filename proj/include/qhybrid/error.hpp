#pragma once

#include <stdexcept>
#include <string>

namespace qhybrid {

// Every failure raised by the library derives from Error so callers can
// catch the whole family at an API boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sample length does not match the model's variable count.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// A model is larger than a backend (or the exact enumerator) accepts.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed JSON / TSPLIB input or a malformed remote payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Network level failure talking to a remote sampler. Timeouts, refused
// connections and 5xx replies are retryable.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

// A problem instance cannot be encoded (too small, more vehicles than
// clients, non-integral capacity data, ...).
class InstanceError : public Error {
 public:
  using Error::Error;
};

}  // namespace qhybrid
