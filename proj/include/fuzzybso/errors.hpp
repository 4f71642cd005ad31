#pragma once

#include <stdexcept>
#include <string>

namespace fuzzybso {

/// Invalid configuration value; the message names the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or incompatible input data; the message carries row/column location.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fuzzybso
