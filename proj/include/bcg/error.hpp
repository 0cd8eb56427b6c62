#pragma once

#include <stdexcept>
#include <string>

namespace bcg {

enum class ErrorKind {
  unsupported_model,
  grid_too_coarse,
  under_resolved,
  incompatible_measures,
  invalid_parameter,
  invalid_rotation,
  degenerate_measure,
  experiment_invalid,
  divergent_entropy_parameter,
  solver_failure,
  convexity_violation,
  not_implemented,
  io_error,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a moment matrix that must be inverted is singular.
/// Carries the number of numerically-zero singular values.
class DegenerateMeasure : public Error {
 public:
  DegenerateMeasure(int kernel_dim, const std::string& what)
      : Error(ErrorKind::degenerate_measure, what), kernel_dim_(kernel_dim) {}

  int kernel_dim() const { return kernel_dim_; }

 private:
  int kernel_dim_;
};

}  // namespace bcg
