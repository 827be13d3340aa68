#include "memopt/assembly.hpp"

#include "memopt/errors.hpp"
#include "memopt/quadrature.hpp"

namespace memopt {

namespace {

int default_degree(const ScalarSpace& space, int quad_degree) {
  return quad_degree >= 0 ? quad_degree : 2 * space.order + 2;
}

void check_same_mesh(const ScalarSpace& space, const DeformationState& deformation) {
  if (space.mesh != deformation.mesh)
    throw StructuralError("assembly: space and deformation use different meshes");
}

// Assembles sum over elements of w * (c_mass phi_i phi_j + c_stiff grad phi_i . grad phi_j).
CsrMatrix assemble_scalar_bilinear(const ScalarSpace& space, const DeformationState& deformation,
                                   double c_stiff, double c_mass, int quad_degree) {
  check_same_mesh(space, deformation);
  const SurfaceMesh& mesh = *space.mesh;
  QuadratureRule rule = quadrature(QuadDomain::Triangle, default_degree(space, quad_degree));
  const int nd = space.dofs_per_element();
  TripletList triplets(space.dim(), space.dim());

  std::array<int, 10> dofs;
  double phi[10];
  std::array<double, 2> grad[10];
  Vec3 sg[10];
  double local[10][10];

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    space.element_dofs(t, dofs);
    ElementGeometry geom(mesh, &deformation, t);
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j) local[i][j] = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double x = rule.points[q][0], y = rule.points[q][1];
      ElemSample s = geom.sample(x, y);
      double w = rule.weights[q] * s.dA;
      space.eval_basis(t, x, y, phi);
      if (c_stiff != 0.0) {
        space.eval_basis_grad(t, x, y, grad);
        for (int i = 0; i < nd; ++i) sg[i] = grad[i][0] * s.b[0] + grad[i][1] * s.b[1];
      }
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j <= i; ++j) {
          double v = c_mass * phi[i] * phi[j];
          if (c_stiff != 0.0) v += c_stiff * dot(sg[i], sg[j]);
          local[i][j] += w * v;
        }
    }
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j <= i; ++j) {
        triplets.add(dofs[i], dofs[j], local[i][j]);
        if (i != j) triplets.add(dofs[j], dofs[i], local[i][j]);
      }
  }
  return CsrMatrix::from_triplets(triplets);
}

}  // namespace

CsrMatrix assemble_mass(const ScalarSpace& space, const DeformationState& deformation,
                        int quad_degree) {
  return assemble_scalar_bilinear(space, deformation, 0.0, 1.0, quad_degree);
}

CsrMatrix assemble_scalar_h1(const ScalarSpace& space, const DeformationState& deformation,
                             double eps_mass, int quad_degree) {
  return assemble_scalar_bilinear(space, deformation, 1.0, eps_mass, quad_degree);
}

CsrMatrix assemble_h1_metric(const VectorSpace& space, double epsilon,
                             const DeformationState& deformation, int quad_degree) {
  if (!(epsilon > 0.0)) throw ConfigError("assemble_h1_metric: epsilon must be positive");
  CsrMatrix scalar = assemble_scalar_bilinear(space.scalar, deformation, 1.0, epsilon, quad_degree);
  // dV : dW for componentwise fields phi e_a, psi e_b is delta_ab grad phi . grad psi,
  // so the vector metric is three interleaved copies of the scalar operator.
  TripletList triplets(3 * scalar.rows, 3 * scalar.cols);
  for (int r = 0; r < scalar.rows; ++r)
    for (int k = scalar.row_ptr[r]; k < scalar.row_ptr[r + 1]; ++k)
      for (int c = 0; c < 3; ++c) triplets.add(3 * r + c, 3 * scalar.col[k] + c, scalar.val[k]);
  return CsrMatrix::from_triplets(triplets);
}

TripletList assemble_divergence(const ScalarSpace& velocity, const ScalarSpace& pressure,
                                const DeformationState& deformation, int quad_degree) {
  check_same_mesh(velocity, deformation);
  if (velocity.mesh != pressure.mesh)
    throw StructuralError("assemble_divergence: spaces on different meshes");
  const SurfaceMesh& mesh = *velocity.mesh;
  QuadratureRule rule = quadrature(QuadDomain::Triangle, default_degree(velocity, quad_degree));
  const int nv = velocity.dofs_per_element();
  const int np = pressure.dofs_per_element();
  TripletList triplets(pressure.dim(), 3 * velocity.dim());

  std::array<int, 10> vdofs, pdofs;
  double psi[10];
  std::array<double, 2> grad[10];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    velocity.element_dofs(t, vdofs);
    pressure.element_dofs(t, pdofs);
    ElementGeometry geom(mesh, &deformation, t);
    double local[10][30] = {};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double x = rule.points[q][0], y = rule.points[q][1];
      ElemSample s = geom.sample(x, y);
      double w = rule.weights[q] * s.dA;
      pressure.eval_basis(t, x, y, psi);
      velocity.eval_basis_grad(t, x, y, grad);
      for (int i = 0; i < nv; ++i) {
        // Div_S (phi_i e_a) = (grad_S phi_i)_a
        Vec3 sg = grad[i][0] * s.b[0] + grad[i][1] * s.b[1];
        for (int j = 0; j < np; ++j)
          for (int a = 0; a < 3; ++a) local[j][3 * i + a] += w * psi[j] * sg[a];
      }
    }
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < nv; ++i)
        for (int a = 0; a < 3; ++a) triplets.add(pdofs[j], 3 * vdofs[i] + a, local[j][3 * i + a]);
  }
  return triplets;
}

}  // namespace memopt
