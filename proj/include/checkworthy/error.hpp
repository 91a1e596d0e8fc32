#pragma once

#include <stdexcept>
#include <string>

namespace checkworthy {

/// Malformed input file or stream. Messages name the source and 1-based line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural mismatch between inputs (alignment, layout, missing keys).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration. Raised before any work starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure talking to a remote score service.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace checkworthy
