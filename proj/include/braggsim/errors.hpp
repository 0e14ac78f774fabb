#pragma once

#include <stdexcept>
#include <string>

namespace braggsim {

// Precondition violated by a caller-supplied value.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Input lies outside the validity range of a physical model.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A frequency grid does not resolve or cover a spectrum well enough.
class CoverageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed scenario configuration. `path` is a JSON pointer, `line` is
// 1-based or 0 when unknown.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string path, int line, const std::string& what)
    : std::runtime_error(what), path_(std::move(path)), line_(line) {}

  const std::string& path() const noexcept { return path_; }
  int line() const noexcept { return line_; }

private:
  std::string path_;
  int line_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace braggsim
