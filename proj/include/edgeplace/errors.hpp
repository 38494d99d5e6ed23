#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edgeplace {

/// Configuration problem tied to one key of the flat config document.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// An exhaustive routine was asked to enumerate more profiles than allowed.
class SizeCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or incomplete trace file. line() is 1-based, 0 if not tied to a row.
class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& message)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " +
                                           message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A proven invariant did not hold. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace edgeplace
