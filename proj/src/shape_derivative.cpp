#include "memopt/shape_derivative.hpp"

#include <cmath>

#include "memopt/errors.hpp"
#include "memopt/quadrature.hpp"

namespace memopt {

std::vector<double> assemble_equation_diff(const VectorSpace& space,
                                           const DeformationState& deformation,
                                           const std::vector<double>& kappa,
                                           const std::vector<double>& sigma,
                                           const AveragedNormalField& normals,
                                           DerivativeMode mode, int* denominator_warnings) {
  const ScalarSpace& sc = space.scalar;
  const SurfaceMesh& mesh = *sc.mesh;
  const bool full = mode == DerivativeMode::Full;
  std::vector<double> load(space.dim(), 0.0);
  const int nd = sc.dofs_per_element();
  QuadratureRule tri_rule = quadrature(QuadDomain::Triangle, 2 * sc.order + 2);
  QuadratureRule seg_rule = quadrature(QuadDomain::Segment, 2 * sc.order + 2);
  int warnings = 0;

  std::array<int, 10> dofs;
  double phi[10];
  std::array<double, 2> grad[10];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    sc.element_dofs(t, dofs);
    ElementGeometry geom(mesh, &deformation, t);

    for (std::size_t q = 0; q < tri_rule.size(); ++q) {
      double x = tri_rule.points[q][0], y = tri_rule.points[q][1];
      ElemSample s = geom.sample(x, y);
      double w = tri_rule.weights[q] * s.dA;
      sc.eval_basis(t, x, y, phi);
      sc.eval_basis_grad(t, x, y, grad);
      double k = 0.0, sig = 0.0;
      Vec3 grad_sigma{};
      for (int i = 0; i < nd; ++i) {
        k += phi[i] * kappa[dofs[i]];
        sig += phi[i] * sigma[dofs[i]];
        if (full) grad_sigma += sigma[dofs[i]] * (grad[i][0] * s.b[0] + grad[i][1] * s.b[1]);
      }
      double div_factor = sig * k + (full ? s.tr_dnu * sig : 0.0);
      for (int i = 0; i < nd; ++i) {
        Vec3 g = grad[i][0] * s.b[0] + grad[i][1] * s.b[1];
        for (int a = 0; a < 3; ++a) {
          // X = phi_i e_a: Div X = g_a; (dX dsigma).nu = nu_a (g . grad_sigma);
          // dX : dnu = sum_c g_c dnu(a, c).
          double v = g[a] * div_factor;
          if (full) {
            v += s.nu[a] * dot(g, grad_sigma);
            double contraction = 0.0;
            for (int c = 0; c < 3; ++c) contraction += g[c] * s.dnu(a, c);
            v -= contraction * sig;
          }
          load[3 * dofs[i] + a] += w * v;
        }
      }
    }

    for (int le = 0; le < 3; ++le) {
      int edge = mesh.triangle_edges[t][le];
      const EdgeRecord& rec = mesh.edges[edge];
      for (std::size_t q = 0; q < seg_rule.size(); ++q) {
        double sref = seg_rule.points[q][0];
        EdgeSample es = geom.edge_sample(le, sref);
        Vec3 av = normals.eval(edge, edge_param_to_local(rec, t, sref));
        double xn = dot(es.mu, av);
        if (std::abs(xn) >= 1.0 - 1e-10)
          throw DegeneracyError("shape derivative: near-right-angle fold on edge " +
                                std::to_string(edge));
        double denom_sq = 1.0 - xn * xn;
        double denom = std::sqrt(denom_sq);
        if (denom < 1e-8) {
          denom = 1e-8;
          ++warnings;
        }
        double angle = std::asin(xn);
        sc.eval_basis(t, es.ref[0], es.ref[1], phi);
        sc.eval_basis_grad(t, es.ref[0], es.ref[1], grad);
        double sig = 0.0;
        for (int i = 0; i < nd; ++i) sig += phi[i] * sigma[dofs[i]];
        double w = seg_rule.weights[q] * es.dL * sig;
        for (int i = 0; i < nd; ++i) {
          Vec3 g = grad[i][0] * es.b[0] + grad[i][1] * es.b[1];
          double g_tau = dot(g, es.t_ccw), g_mu = dot(g, es.mu), g_av = dot(g, av);
          for (int a = 0; a < 3; ++a) {
            // (dX tau).tau ; ((dX - dX^T) mu).<nu> ; (dX mu).nu
            double v = es.t_ccw[a] * g_tau * angle + (av[a] * g_mu - es.mu[a] * g_av) / denom;
            if (full) v -= es.nu[a] * g_mu;
            load[3 * dofs[i] + a] += w * v;
          }
        }
      }
    }
  }
  if (denominator_warnings) *denominator_warnings += warnings;
  return load;
}

std::vector<double> assemble_cost_diff(const VectorSpace& space,
                                       const DeformationState& deformation,
                                       const std::vector<double>& kappa,
                                       const PhysicalParams& params,
                                       const ConstraintParams& constraints) {
  const ScalarSpace& sc = space.scalar;
  const SurfaceMesh& mesh = *sc.mesh;
  std::vector<double> load(space.dim(), 0.0);
  const int nd = sc.dofs_per_element();
  QuadratureRule rule = quadrature(QuadDomain::Triangle, 2 * sc.order + 2);

  MeshMeasures m = measure(mesh, deformation);
  const bool area_pen = constraints.cA != 0.0;
  const bool vol_pen = constraints.cV != 0.0;
  const bool local_pen = constraints.cAloc != 0.0 && !constraints.T0.empty();
  double area_factor =
      area_pen ? 2.0 * constraints.cA * (m.total_area - constraints.A0) * constraints.area_norm()
               : 0.0;
  double vol_factor =
      vol_pen ? 2.0 * constraints.cV * (m.enclosed_volume - constraints.V0) *
                    constraints.volume_norm()
              : 0.0;

  std::array<int, 10> dofs;
  double phi[10];
  std::array<double, 2> grad[10];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    sc.element_dofs(t, dofs);
    ElementGeometry geom(mesh, &deformation, t);
    double local_factor =
        local_pen ? 2.0 * constraints.cAloc * (m.element_areas[t] - constraints.T0[t]) *
                        constraints.local_norm(t)
                  : 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double x = rule.points[q][0], y = rule.points[q][1];
      ElemSample s = geom.sample(x, y);
      double w = rule.weights[q] * s.dA;
      sc.eval_basis(t, x, y, phi);
      sc.eval_basis_grad(t, x, y, grad);
      double k = 0.0;
      for (int i = 0; i < nd; ++i) k += phi[i] * kappa[dofs[i]];
      double dev = 0.5 * k - params.H0;
      double div_factor = 2.0 * params.kb * dev * dev + area_factor + local_factor;
      for (int i = 0; i < nd; ++i) {
        Vec3 g = grad[i][0] * s.b[0] + grad[i][1] * s.b[1];
        for (int a = 0; a < 3; ++a)
          load[3 * dofs[i] + a] += w * (g[a] * div_factor + vol_factor * phi[i] * s.nu[a]);
      }
    }
  }
  return load;
}

std::vector<double> shape_derivative_total(const VectorSpace& space,
                                           const DeformationState& deformation,
                                           const std::vector<double>& kappa,
                                           const std::vector<double>& sigma,
                                           const PhysicalParams& params,
                                           const ConstraintParams& constraints,
                                           DerivativeMode mode) {
  if (mode == DerivativeMode::LowestOrder && space.scalar.mesh->geometry_order != 1)
    throw ConfigError("lowest-order shape derivative requires affine (order 1) geometry");
  AveragedNormalField normals(*space.scalar.mesh, deformation);
  std::vector<double> load = assemble_equation_diff(space, deformation, kappa, sigma, normals, mode);
  std::vector<double> cost = assemble_cost_diff(space, deformation, kappa, params, constraints);
  for (std::size_t i = 0; i < load.size(); ++i) load[i] += cost[i];
  return load;
}

void apply_displacement(DeformationState& deformation, const std::vector<double>& field,
                        double scale) {
  if (field.size() != deformation.displacement.size())
    throw StructuralError("apply_displacement: field/displacement layout mismatch");
  for (std::size_t i = 0; i < field.size(); ++i) deformation.displacement[i] += scale * field[i];
}

FdReport finite_difference_check(const std::function<double(const DeformationState&)>& cost,
                                 const DeformationState& base, const std::vector<double>& probe,
                                 double analytic, const std::vector<double>& t_ladder) {
  FdReport report;
  for (double t : t_ladder) {
    FdLadderEntry entry;
    entry.t = t;
    entry.analytic = analytic;
    try {
      DeformationState plus = base, minus = base;
      apply_displacement(plus, probe, t);
      apply_displacement(minus, probe, -t);
      entry.fd_value = (cost(plus) - cost(minus)) / (2.0 * t);
      entry.abs_err = std::abs(entry.fd_value - analytic);
    } catch (const DegeneracyError&) {
      entry.skipped = true;
    }
    report.entries.push_back(entry);
  }
  const FdLadderEntry* prev = nullptr;
  for (const auto& e : report.entries) {
    if (e.skipped) continue;
    if (prev && e.abs_err > 0.0 && prev->abs_err > 0.0 && e.t < prev->t)
      report.observed_order = std::log(prev->abs_err / e.abs_err) / std::log(prev->t / e.t);
    prev = &e;
  }
  return report;
}

}  // namespace memopt
