#include "memopt/curvature.hpp"

#include <cmath>

#include "memopt/assembly.hpp"
#include "memopt/errors.hpp"
#include "memopt/quadrature.hpp"
#include "memopt/solvers.hpp"

namespace memopt {

namespace {

constexpr double kFoldTol = 1e-10;  // |nu_L + nu_R| below this is a fold-over

Vec3 checked_normalize(const Vec3& sum) {
  double n = norm(sum);
  if (n < kFoldTol)
    throw DegeneracyError("averaged normal: adjacent element normals are near-antipodal");
  return (1.0 / n) * sum;
}

}  // namespace

AveragedNormalField::AveragedNormalField(const SurfaceMesh& mesh,
                                         const DeformationState& deformation)
    : order_(mesh.geometry_order - 1) {
  coeff_.assign(static_cast<std::size_t>(mesh.num_edges()) * (order_ + 1), Vec3{});
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const EdgeRecord& rec = mesh.edges[e];
    ElementGeometry left(mesh, &deformation, rec.left);
    ElementGeometry right(mesh, &deformation, rec.right);
    // Left traverses the edge v0 -> v1 at local parameter s, right at 1 - s.
    auto normal_sum = [&](double s) {
      Vec3 sum = left.edge_sample(rec.left_local, s).nu +
                 right.edge_sample(rec.right_local, 1.0 - s).nu;
      if (norm(sum) < kFoldTol)
        throw DegeneracyError("averaged normal: fold-over on edge " + std::to_string(e));
      return sum;
    };
    if (order_ == 0) {
      coeff_[e] = normal_sum(0.5);
      continue;
    }
    // L2 projection of nu_L + nu_R onto linears along the (deformed) edge.
    QuadratureRule rule = quadrature(QuadDomain::Segment, 2 * mesh.geometry_order + 2);
    double m[2][2] = {};
    Vec3 rhs[2];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double s = rule.points[q][0];
      double dL = left.edge_sample(rec.left_local, s).dL;
      double w = rule.weights[q] * dL;
      Vec3 sum = normal_sum(s);
      double l[2] = {1.0 - s, s};
      for (int i = 0; i < 2; ++i) {
        rhs[i] += (w * l[i]) * sum;
        for (int j = 0; j < 2; ++j) m[i][j] += w * l[i] * l[j];
      }
    }
    double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (!(det > 0.0)) throw DegeneracyError("averaged normal: singular edge projection");
    coeff_[2 * e + 0] = (1.0 / det) * (m[1][1] * rhs[0] - m[0][1] * rhs[1]);
    coeff_[2 * e + 1] = (1.0 / det) * (m[0][0] * rhs[1] - m[1][0] * rhs[0]);
  }
}

Vec3 AveragedNormalField::eval(int edge, double s) const {
  if (order_ == 0) return checked_normalize(coeff_[edge]);
  return checked_normalize((1.0 - s) * coeff_[2 * edge] + s * coeff_[2 * edge + 1]);
}

Vec3 averaged_normal(const SurfaceMesh& mesh, const DeformationState& deformation, int edge,
                     double s) {
  return AveragedNormalField(mesh, deformation).eval(edge, s);
}

std::vector<double> assemble_lift_rhs(const ScalarSpace& space,
                                      const DeformationState& deformation,
                                      const AveragedNormalField& normals, int* clamp_warnings) {
  const SurfaceMesh& mesh = *space.mesh;
  std::vector<double> rhs(space.dim(), 0.0);
  const int nd = space.dofs_per_element();
  QuadratureRule tri_rule = quadrature(QuadDomain::Triangle, 2 * space.order + 2);
  QuadratureRule seg_rule = quadrature(QuadDomain::Segment, 2 * space.order + 2);
  int clamps = 0;

  std::array<int, 10> dofs;
  double phi[10];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    space.element_dofs(t, dofs);
    ElementGeometry geom(mesh, &deformation, t);

    if (mesh.geometry_order >= 2) {
      for (std::size_t q = 0; q < tri_rule.size(); ++q) {
        double x = tri_rule.points[q][0], y = tri_rule.points[q][1];
        ElemSample s = geom.sample(x, y);
        double w = tri_rule.weights[q] * s.dA * s.tr_dnu;
        space.eval_basis(t, x, y, phi);
        for (int i = 0; i < nd; ++i) rhs[dofs[i]] -= w * phi[i];
      }
    }

    for (int le = 0; le < 3; ++le) {
      int edge = mesh.triangle_edges[t][le];
      const EdgeRecord& rec = mesh.edges[edge];
      for (std::size_t q = 0; q < seg_rule.size(); ++q) {
        double s = seg_rule.points[q][0];
        EdgeSample es = geom.edge_sample(le, s);
        double sg = edge_param_to_local(rec, t, s);  // involution: local <-> global
        double x = dot(es.mu, normals.eval(edge, sg));
        if (x > 1.0 || x < -1.0) {
          if (std::abs(x) > 1.0 + 1e-12) ++clamps;
          x = x > 1.0 ? 1.0 : -1.0;
        }
        double w = seg_rule.weights[q] * es.dL * std::asin(x);
        space.eval_basis(t, es.ref[0], es.ref[1], phi);
        for (int i = 0; i < nd; ++i) rhs[dofs[i]] -= w * phi[i];
      }
    }
  }
  if (clamp_warnings) *clamp_warnings += clamps;
  return rhs;
}

std::vector<double> solve_state(const ScalarSpace& space, const DeformationState& deformation) {
  AveragedNormalField normals(*space.mesh, deformation);
  std::vector<double> rhs = assemble_lift_rhs(space, deformation, normals);
  CsrMatrix mass = assemble_mass(space, deformation);
  std::vector<double> kappa;
  solve_spd(mass, rhs, kappa, 1e-10);
  return kappa;
}

std::vector<double> solve_adjoint(const std::vector<double>& kappa, const PhysicalParams& params) {
  std::vector<double> sigma(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i)
    sigma[i] = -2.0 * params.kb * (0.5 * kappa[i] - params.H0);
  return sigma;
}

BendingEnergy bending_energy(const ScalarSpace& space, const DeformationState& deformation,
                             const std::vector<double>& kappa, const PhysicalParams& params) {
  const SurfaceMesh& mesh = *space.mesh;
  QuadratureRule rule = quadrature(QuadDomain::Triangle, 2 * space.order + 2);
  const int nd = space.dofs_per_element();
  std::array<int, 10> dofs;
  double phi[10];
  double w_total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    space.element_dofs(t, dofs);
    ElementGeometry geom(mesh, &deformation, t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double x = rule.points[q][0], y = rule.points[q][1];
      ElemSample s = geom.sample(x, y);
      space.eval_basis(t, x, y, phi);
      double k = 0.0;
      for (int i = 0; i < nd; ++i) k += phi[i] * kappa[dofs[i]];
      double dev = 0.5 * k - params.H0;
      w_total += rule.weights[q] * s.dA * 2.0 * params.kb * dev * dev;
    }
  }
  BendingEnergy e;
  e.W = w_total;
  e.Estar = w_total / (8.0 * M_PI * params.kb);
  return e;
}

CurvatureErrors curvature_errors(const ScalarSpace& space, const DeformationState& deformation,
                                 const std::vector<double>& kappa,
                                 const std::function<double(const Vec3&)>& kappa_ref) {
  const SurfaceMesh& mesh = *space.mesh;
  ScalarSpace dual_space(mesh, space.order + 1);
  QuadratureRule rule = quadrature(QuadDomain::Triangle, 2 * dual_space.order + 2);
  const int nd = space.dofs_per_element();
  const int nl = dual_space.dofs_per_element();

  std::array<int, 10> dofs, ldofs;
  double phi[10], lphi[10];
  std::vector<double> f(dual_space.dim(), 0.0);
  double l2_sq = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    space.element_dofs(t, dofs);
    dual_space.element_dofs(t, ldofs);
    ElementGeometry geom(mesh, &deformation, t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double x = rule.points[q][0], y = rule.points[q][1];
      ElemSample s = geom.sample(x, y);
      double w = rule.weights[q] * s.dA;
      space.eval_basis(t, x, y, phi);
      dual_space.eval_basis(t, x, y, lphi);
      double k = 0.0;
      for (int i = 0; i < nd; ++i) k += phi[i] * kappa[dofs[i]];
      double diff = k - kappa_ref(s.x);
      l2_sq += w * diff * diff;
      for (int i = 0; i < nl; ++i) f[ldofs[i]] += w * diff * lphi[i];
    }
  }

  const double eps = 1e-10;
  CsrMatrix op = assemble_scalar_h1(dual_space, deformation, eps);
  CsrMatrix mass = assemble_mass(dual_space, deformation);
  std::vector<double> ones(dual_space.dim(), 1.0);
  std::vector<double> lumped = mass.multiply(ones);
  double area = 0.0, f_total = 0.0;
  for (int i = 0; i < dual_space.dim(); ++i) {
    area += lumped[i];
    f_total += f[i];
  }
  // Split the functional into its action on constants (handled in closed form)
  // and a mean-free remainder, which the eps-regularized operator can invert
  // without blowing up the constant mode.
  std::vector<double> f0(f);
  double scale = f_total / area;
  for (int i = 0; i < dual_space.dim(); ++i) f0[i] -= scale * lumped[i];
  std::vector<double> u;
  solve_spd(op, f0, u, 1e-10);
  double fluct_sq = 0.0;
  for (int i = 0; i < dual_space.dim(); ++i) fluct_sq += f0[i] * u[i];

  CurvatureErrors errs;
  errs.L2 = std::sqrt(l2_sq);
  errs.Hminus1 = std::sqrt(std::max(0.0, fluct_sq) + f_total * f_total / area);
  return errs;
}

}  // namespace memopt
