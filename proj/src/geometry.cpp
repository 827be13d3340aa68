#include "memopt/geometry.hpp"

#include <cmath>

#include "memopt/errors.hpp"
#include "memopt/quadrature.hpp"

namespace memopt {

namespace {

constexpr double kLambdaGrad[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};

// Reference point and direction of local edge e, traversed counter-clockwise.
constexpr double kEdgeStart[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
constexpr double kEdgeDir[3][2] = {{1.0, 0.0}, {-1.0, 1.0}, {0.0, -1.0}};

void geom_basis(int order, double x, double y, double* phi) {
  double l[3] = {1.0 - x - y, x, y};
  if (order == 1) {
    for (int i = 0; i < 3; ++i) phi[i] = l[i];
    return;
  }
  for (int i = 0; i < 3; ++i) phi[i] = l[i] * (2.0 * l[i] - 1.0);
  for (int e = 0; e < 3; ++e) phi[3 + e] = 4.0 * l[e] * l[(e + 1) % 3];
}

void geom_basis_grad(int order, double x, double y, double (*grad)[2]) {
  double l[3] = {1.0 - x - y, x, y};
  if (order == 1) {
    for (int i = 0; i < 3; ++i)
      for (int d = 0; d < 2; ++d) grad[i][d] = kLambdaGrad[i][d];
    return;
  }
  for (int i = 0; i < 3; ++i)
    for (int d = 0; d < 2; ++d) grad[i][d] = (4.0 * l[i] - 1.0) * kLambdaGrad[i][d];
  for (int e = 0; e < 3; ++e) {
    int a = e, b = (e + 1) % 3;
    for (int d = 0; d < 2; ++d)
      grad[3 + e][d] = 4.0 * (l[b] * kLambdaGrad[a][d] + l[a] * kLambdaGrad[b][d]);
  }
}

struct Jacobians {
  Vec3 x, J1, J2;    // deformed
  Vec3 rJ1, rJ2;     // reference (undeformed)
};

}  // namespace

ElementGeometry::ElementGeometry(const SurfaceMesh& mesh, const DeformationState* deformation,
                                 int triangle)
    : order_(mesh.geometry_order), nnodes_(mesh.geometry_order == 1 ? 3 : 6), triangle_(triangle) {
  const auto& tri = mesh.triangles[triangle];
  int gnode[6];
  for (int i = 0; i < 3; ++i) gnode[i] = tri[i];
  if (order_ == 2)
    for (int e = 0; e < 3; ++e) gnode[3 + e] = mesh.num_vertices() + mesh.triangle_edges[triangle][e];
  for (int i = 0; i < nnodes_; ++i) {
    ref_nodes_[i] = mesh.geometry_node(gnode[i]);
    nodes_[i] = ref_nodes_[i];
    if (deformation) nodes_[i] += deformation->node_displacement(gnode[i]);
  }
  hess_[0] = hess_[1] = hess_[2] = Vec3{0, 0, 0};
  if (order_ == 2) {
    // Second derivatives of the quadratic map are constant on the element.
    auto add = [&](const Vec3& q, double h11, double h12, double h22) {
      hess_[0] += h11 * q;
      hess_[1] += h12 * q;
      hess_[2] += h22 * q;
    };
    for (int i = 0; i < 3; ++i) {
      const double* g = kLambdaGrad[i];
      add(nodes_[i], 4.0 * g[0] * g[0], 4.0 * g[0] * g[1], 4.0 * g[1] * g[1]);
    }
    for (int e = 0; e < 3; ++e) {
      const double* ga = kLambdaGrad[e];
      const double* gb = kLambdaGrad[(e + 1) % 3];
      add(nodes_[3 + e], 8.0 * ga[0] * gb[0], 4.0 * (ga[0] * gb[1] + ga[1] * gb[0]),
          8.0 * ga[1] * gb[1]);
    }
  }
}

namespace {

Jacobians compute_jacobians(int order, int nnodes, const Vec3* nodes, const Vec3* ref_nodes,
                            double x, double y) {
  double phi[6];
  double grad[6][2];
  geom_basis(order, x, y, phi);
  geom_basis_grad(order, x, y, grad);
  Jacobians jac;
  jac.x = jac.J1 = jac.J2 = jac.rJ1 = jac.rJ2 = Vec3{0, 0, 0};
  for (int i = 0; i < nnodes; ++i) {
    jac.x += phi[i] * nodes[i];
    jac.J1 += grad[i][0] * nodes[i];
    jac.J2 += grad[i][1] * nodes[i];
    jac.rJ1 += grad[i][0] * ref_nodes[i];
    jac.rJ2 += grad[i][1] * ref_nodes[i];
  }
  return jac;
}

// Surface-gradient factors b: grad_S f = g0*b[0] + g1*b[1] for reference
// gradient (g0, g1) of f on the element.
void gradient_factors(const Vec3& J1, const Vec3& J2, Vec3 b[2]) {
  double g11 = dot(J1, J1), g12 = dot(J1, J2), g22 = dot(J2, J2);
  double det = g11 * g22 - g12 * g12;
  if (!(det > 0.0)) throw DegeneracyError("element Jacobian is rank-deficient");
  double i11 = g22 / det, i12 = -g12 / det, i22 = g11 / det;
  b[0] = i11 * J1 + i12 * J2;
  b[1] = i12 * J1 + i22 * J2;
}

}  // namespace

ElemSample ElementGeometry::sample(double x, double y) const {
  Jacobians jac = compute_jacobians(order_, nnodes_, nodes_, ref_nodes_, x, y);
  ElemSample s;
  s.x = jac.x;
  Vec3 cr = cross(jac.J1, jac.J2);
  s.dA = norm(cr);
  if (!(s.dA > 1e-300)) throw DegeneracyError("collapsed element encountered");
  s.nu = (1.0 / s.dA) * cr;
  gradient_factors(jac.J1, jac.J2, s.b);

  Vec3 rcr = cross(jac.rJ1, jac.rJ2);
  double ref_dA = norm(rcr);
  if (!(ref_dA > 1e-300)) throw DegeneracyError("collapsed reference element");
  s.w_ratio = s.dA / ref_dA;
  s.A = outer(s.b[0], jac.rJ1) + outer(s.b[1], jac.rJ2);

  s.dnu = Mat3{};  // zero
  s.tr_dnu = 0.0;
  if (order_ == 2) {
    Vec3 d1 = cross(hess_[0], jac.J2) + cross(jac.J1, hess_[1]);
    Vec3 d2 = cross(hess_[1], jac.J2) + cross(jac.J1, hess_[2]);
    Vec3 u1 = (1.0 / s.dA) * (d1 - dot(d1, s.nu) * s.nu);
    Vec3 u2 = (1.0 / s.dA) * (d2 - dot(d2, s.nu) * s.nu);
    s.dnu = outer(u1, s.b[0]) + outer(u2, s.b[1]);
    s.tr_dnu = dot(u1, s.b[0]) + dot(u2, s.b[1]);
  }
  return s;
}

EdgeSample ElementGeometry::edge_sample(int local_edge, double s) const {
  const double* p0 = kEdgeStart[local_edge];
  const double* dir = kEdgeDir[local_edge];
  double rx = p0[0] + s * dir[0], ry = p0[1] + s * dir[1];
  Jacobians jac = compute_jacobians(order_, nnodes_, nodes_, ref_nodes_, rx, ry);

  EdgeSample es;
  es.ref[0] = rx;
  es.ref[1] = ry;
  es.x = jac.x;
  Vec3 dxds = dir[0] * jac.J1 + dir[1] * jac.J2;
  es.dL = norm(dxds);
  if (!(es.dL > 1e-300)) throw DegeneracyError("collapsed element edge encountered");
  es.t_ccw = (1.0 / es.dL) * dxds;

  Vec3 cr = cross(jac.J1, jac.J2);
  double dA = norm(cr);
  if (!(dA > 1e-300)) throw DegeneracyError("collapsed element encountered");
  es.nu = (1.0 / dA) * cr;
  es.mu = normalized(cross(es.t_ccw, es.nu));
  gradient_factors(jac.J1, jac.J2, es.b);

  Vec3 ref_dxds = dir[0] * jac.rJ1 + dir[1] * jac.rJ2;
  double ref_dL = norm(ref_dxds);
  if (!(ref_dL > 1e-300)) throw DegeneracyError("collapsed reference edge");
  es.w_ratio = es.dL / ref_dL;
  return es;
}

MeshMeasures measure(const SurfaceMesh& mesh, const DeformationState& deformation) {
  MeshMeasures m;
  m.element_areas.assign(mesh.num_triangles(), 0.0);
  QuadratureRule rule = quadrature(QuadDomain::Triangle, 2 * mesh.geometry_order + 2);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    ElementGeometry geom(mesh, &deformation, t);
    double area = 0.0;
    for (int q = 0; q < static_cast<int>(rule.size()); ++q) {
      ElemSample s = geom.sample(rule.points[q][0], rule.points[q][1]);
      double w = rule.weights[q] * s.dA;
      area += w;
      m.enclosed_volume += w * dot(s.x, s.nu) / 3.0;
    }
    m.element_areas[t] = area;
    m.total_area += area;
  }
  double mean = m.total_area / static_cast<double>(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t)
    if (m.element_areas[t] < 1e-12 * mean)
      throw DegeneracyError("element " + std::to_string(t) + " collapsed (area " +
                            std::to_string(m.element_areas[t]) + ")");
  return m;
}

Frame element_frame(const SurfaceMesh& mesh, const DeformationState& deformation, int triangle,
                    int local_edge, double s) {
  ElementGeometry geom(mesh, &deformation, triangle);
  EdgeSample es = geom.edge_sample(local_edge, s);
  Frame f;
  f.nu = es.nu;
  f.mu = es.mu;
  f.tau = cross(f.mu, f.nu);
  return f;
}

}  // namespace memopt
