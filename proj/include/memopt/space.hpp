#pragma once

#include <array>
#include <vector>

#include "memopt/mesh.hpp"

namespace memopt {

/// Scalar Lagrange space on the surface, orders 1-3.
/// Dof layout: vertices, then (order >= 2) edge nodes, then (order 3) one
/// bubble per triangle. Order-3 edges carry two nodes ordered along the
/// global edge direction v0 -> v1.
struct ScalarSpace {
  const SurfaceMesh* mesh = nullptr;
  int order = 1;

  ScalarSpace() = default;
  ScalarSpace(const SurfaceMesh& m, int k);

  int dim() const;
  int dofs_per_element() const { return order == 1 ? 3 : (order == 2 ? 6 : 10); }
  void element_dofs(int triangle, std::array<int, 10>& dofs) const;

  /// Nodal basis at reference point (x, y); phi has dofs_per_element entries
  /// in element-local order (matching element_dofs).
  void eval_basis(int triangle, double x, double y, double* phi) const;
  void eval_basis_grad(int triangle, double x, double y, std::array<double, 2>* grad) const;
};

/// Vector space = 3 interleaved copies of a scalar space; dof(i, comp) = 3*i + comp.
struct VectorSpace {
  ScalarSpace scalar;

  VectorSpace() = default;
  VectorSpace(const SurfaceMesh& m, int k) : scalar(m, k) {}

  int dim() const { return 3 * scalar.dim(); }
};

}  // namespace memopt
