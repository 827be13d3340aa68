#pragma once

#include <stdexcept>
#include <string>

namespace memopt {

/// Bad configuration: unknown keys, invalid parameter ranges, mode mismatches.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Broken mesh topology: non-manifold edges, inconsistent orientation.
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// Geometric collapse: degenerate Jacobians, folded normals, vanishing elements.
struct DegeneracyError : std::runtime_error {
  explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear solver failure: iteration cap, singular system.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// I/O failure with path context.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace memopt
