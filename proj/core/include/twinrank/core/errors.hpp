#pragma once

#include <stdexcept>
#include <string>

namespace twinrank {

/// Invalid application or run configuration, detected at setup.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or non-conforming bytes (state encodings, image files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run-directory I/O failure. Not a modeled fault; aborts the run.
class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twinrank
