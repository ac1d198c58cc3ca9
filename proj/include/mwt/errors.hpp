#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mwt {

struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

struct MeshError : std::runtime_error {
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

struct AssemblyError : std::runtime_error {
  explicit AssemblyError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear solver failure; carries the iteration count and residual history
/// so callers can log the convergence trace.
struct SolverError : std::runtime_error {
  SolverError(const std::string& what, int iterations_, double final_residual_,
              std::vector<double> history_ = {})
      : std::runtime_error(what),
        iterations(iterations_),
        final_residual(final_residual_),
        history(std::move(history_)) {}
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> history;
};

struct OptimizationError : std::runtime_error {
  explicit OptimizationError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mwt
