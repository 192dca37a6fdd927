#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace attestpo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (bad order, τ outside [-1,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rotation too close to 180 degrees for a Rodrigues representation.
class SingularRotation : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class SingularInnovation : public Error {
 public:
  using Error::Error;
};

class MismatchedTracks : public Error {
 public:
  using Error::Error;
};

class NonMonotoneTime : public Error {
 public:
  using Error::Error;
};

/// CSV header or row does not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration text. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::string key = {})
      : Error(what), line_(line), key_(std::move(key)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

/// Well-formed configuration with invalid values; lists every violation.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration";
    for (const auto& s : v) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

/// Failure inside a sliding-window run, tagged with the window index.
class WindowError : public Error {
 public:
  WindowError(std::size_t window, const std::string& what)
      : Error("window " + std::to_string(window) + ": " + what), window_(window) {}
  std::size_t window() const noexcept { return window_; }

 private:
  std::size_t window_;
};

}  // namespace attestpo
