#pragma once

#include <stdexcept>
#include <string>

namespace wbanpriv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wrong frame or block length.
class FramingError : public Error {
 public:
  using Error::Error;
};

/// Sink registry misuse, e.g. the same Uid programmed twice.
class ProvisioningError : public Error {
 public:
  using Error::Error;
};

/// A protocol step invoked out of order (respond before verify, ...).
class ProtocolOrderError : public Error {
 public:
  using Error::Error;
};

/// State that should be unreachable short of a 128-bit collision.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

/// An adversary oracle was called with its budget exhausted.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment, game or device configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wbanpriv
