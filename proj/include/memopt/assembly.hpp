#pragma once

#include "memopt/geometry.hpp"
#include "memopt/space.hpp"
#include "memopt/sparse.hpp"

namespace memopt {

/// M_ij = int phi_i phi_j over the deformed surface.
/// quad_degree < 0 selects the default 2*order + 2.
CsrMatrix assemble_mass(const ScalarSpace& space, const DeformationState& deformation,
                        int quad_degree = -1);

/// K_ij = int grad_S phi_i . grad_S phi_j + eps_mass * phi_i phi_j.
CsrMatrix assemble_scalar_h1(const ScalarSpace& space, const DeformationState& deformation,
                             double eps_mass, int quad_degree = -1);

/// Vector H1 metric (dV : dW + epsilon V.W); with componentwise vector fields
/// this is exactly three interleaved copies of the scalar operator.
CsrMatrix assemble_h1_metric(const VectorSpace& space, double epsilon,
                             const DeformationState& deformation, int quad_degree = -1);

/// Divergence-constraint block b(p, V) = int p Div_S V.
/// Rows: pressure dofs; columns: interleaved vector dofs 3*i + comp.
TripletList assemble_divergence(const ScalarSpace& velocity, const ScalarSpace& pressure,
                                const DeformationState& deformation, int quad_degree = -1);

}  // namespace memopt
