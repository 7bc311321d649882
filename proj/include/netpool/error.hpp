#pragma once

#include <stdexcept>
#include <string>

namespace netpool {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can separate library diagnostics from unexpected faults.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad structural input: sizes, infeasible generator arguments, index range.
class InvalidSize : public Error {
 public:
  using Error::Error;
};

// Parameter outside the admissible set (p outside [0,1], rho outside [0,1)).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a closed form.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Vector/matrix dimensions that do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Factorization or inversion failure.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Experiment configuration that fails validation. key() names the offender.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace netpool
