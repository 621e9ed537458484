#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lpiv {

enum class ErrorKind {
  precondition,
  dimension,
  rank,
  conditioning,
  domain,
  input,
  divergence,
  singular_design,
  empty_design,
  insufficient_data,
  config,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error thrown by the library. The kind is stable and is what
/// the CLI reports in its error JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown when the filter constraint solve misses its residual tolerance.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double residual)
      : Error(ErrorKind::conditioning, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step)
      : Error(ErrorKind::divergence, what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

class SingularDesignError : public Error {
 public:
  SingularDesignError(const std::string& what, double sigma_min)
      : Error(ErrorKind::singular_design, what), sigma_min_(sigma_min) {}
  double sigma_min() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::rank: return "rank";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::domain: return "domain";
    case ErrorKind::input: return "input";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::singular_design: return "singular_design";
    case ErrorKind::empty_design: return "empty_design";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace lpiv
