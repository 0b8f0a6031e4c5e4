#pragma once

#include <stdexcept>
#include <string>

namespace pcomp {

enum class ErrorKind {
  config,     // malformed discretization or solver settings
  usage,      // precondition of a public operation violated
  model,      // reaction coefficients violate a standing hypothesis
  numerical,  // solver breakdown, non-finite values, degenerate eigenvectors
  parse,      // scenario file could not be read
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

/// Raised when a reaction term fails one of the hypotheses; `hypothesis()`
/// names it ("H2", "H3", ...).
class ModelError : public Error {
 public:
  ModelError(std::string hypothesis, const std::string& what)
      : Error(ErrorKind::model, hypothesis + ": " + what), hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace pcomp
