#pragma once

#include <stdexcept>
#include <string>

#include "qsmin/numeric.hpp"

namespace qsmin {

enum class ErrorKind {
  config,
  consistency,
  range,
  depth,
  capacity,
  domain,
  precision,
  geometry,
  degenerate,
  chain,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

// Raised when sum_l e_{k,l} + n_k c_k != 1 at some level.
class ConsistencyError : public Error {
 public:
  ConsistencyError(int level, Rational residual);
  int level() const noexcept { return level_; }
  const Rational& residual() const noexcept { return residual_; }

 private:
  int level_;
  Rational residual_;
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(ErrorKind::range, what) {}
};

class DepthError : public Error {
 public:
  explicit DepthError(const std::string& what) : Error(ErrorKind::depth, what) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(ErrorKind::capacity, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what) : Error(ErrorKind::precision, what) {}
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& what) : Error(ErrorKind::geometry, what) {}
};

class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& what) : Error(ErrorKind::degenerate, what) {}
};

class ChainError : public Error {
 public:
  explicit ChainError(const std::string& what) : Error(ErrorKind::chain, what) {}
};

// CLI exit status: 2 configuration/consistency, 3 degenerate math, 4 precision.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace qsmin
