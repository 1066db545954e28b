#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tortured {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data or files (missing, unreadable, empty after filtering).
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or arguments supplied by the caller.
class ConfigError : public InputError {
 public:
  explicit ConfigError(const std::string& what) : InputError(what) {}
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Serialized artifacts that do not belong together (format version,
// feature count or vocabulary fingerprint disagree).
class VersionMismatch : public InputError {
 public:
  using InputError::InputError;
};

// Vector or matrix shapes that disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace tortured
