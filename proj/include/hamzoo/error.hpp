#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace hamzoo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is the 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbol : public ParseError {
 public:
  UnknownSymbol(std::size_t position, const std::string& name)
      : ParseError(position, "unknown symbol '" + name + "'"), name_(name) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// A nested exponent left the admissible window. `level` is the nesting
/// level that tripped (1-based; the sigma factor reports level + 1).
class OverflowRisk : public Error {
 public:
  OverflowRisk(int level, double argument, const std::string& what)
      : Error("overflow risk at level " + std::to_string(level) + ": " + what),
        level_(level),
        argument_(argument) {}

  int level() const { return level_; }
  double argument() const { return argument_; }

  /// Time stamp, set when the guard fires mid-integration (NaN otherwise).
  double time = std::numeric_limits<double>::quiet_NaN();

 private:
  int level_;
  double argument_;
};

class StepFailure : public Error {
 public:
  StepFailure(double t, const std::string& what)
      : Error("step failure at t=" + std::to_string(t) + ": " + what), time_(t) {}

  double time() const { return time_; }

 private:
  double time_;
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(double error_estimate, const std::string& what)
      : Error(what + " (error estimate " + std::to_string(error_estimate) + ")"),
        error_estimate_(error_estimate) {}

  double error_estimate() const { return error_estimate_; }

 private:
  double error_estimate_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hamzoo
