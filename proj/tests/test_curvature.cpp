#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "memopt/curvature.hpp"
#include "memopt/geometry.hpp"
#include "memopt/mesh.hpp"

using namespace memopt;

namespace {

SurfaceMesh regular_tetrahedron() {
  SurfaceMesh m;
  m.vertices = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  finalize_connectivity(m);
  return m;
}

double rhs_sum(const ScalarSpace& space, const DeformationState& def) {
  AveragedNormalField normals(*space.mesh, def);
  std::vector<double> rhs = assemble_lift_rhs(space, def, normals);
  return std::accumulate(rhs.begin(), rhs.end(), 0.0);
}

}  // namespace

TEST_CASE("tetrahedron: total lifted curvature equals the edge-angle sum") {
  SurfaceMesh m = regular_tetrahedron();
  DeformationState zero(m);
  MeshMeasures meas = measure(m, zero);
  double a = 2.0 * std::sqrt(2.0);  // edge length
  REQUIRE(meas.enclosed_volume == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
  REQUIRE(meas.total_area == doctest::Approx(std::sqrt(3.0) * a * a).epsilon(1e-13));
  // jump angle between face normals is acos(-1/3); six edges of length a
  double expected = -6.0 * a * std::acos(-1.0 / 3.0);
  ScalarSpace space(m, 1);
  CHECK(rhs_sum(space, zero) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("icosahedron: constant curvature with the closed-form value") {
  SurfaceMesh m = generate_icosphere(0, 1.0);
  DeformationState zero(m);
  MeshMeasures meas = measure(m, zero);
  double a = 4.0 / std::sqrt(10.0 + 2.0 * std::sqrt(5.0));
  // jump angle acos(sqrt(5)/3) across each of the 30 edges
  double expected_sum = -30.0 * a * std::acos(std::sqrt(5.0) / 3.0);
  ScalarSpace space(m, 1);
  CHECK(rhs_sum(space, zero) == doctest::Approx(expected_sum).epsilon(1e-12));

  std::vector<double> kappa = solve_state(space, zero);
  double kappa_exact = expected_sum / meas.total_area;
  CHECK(kappa_exact == doctest::Approx(-2.4041).epsilon(1e-4));  // frozen reference
  for (double k : kappa) CHECK(k == doctest::Approx(kappa_exact).epsilon(1e-9));

  // adjoint with kb = 1, H0 = 0 is sigma = -kappa
  std::vector<double> sigma = solve_adjoint(kappa, PhysicalParams{1.0, 0.0});
  for (std::size_t i = 0; i < kappa.size(); ++i)
    CHECK(sigma[i] == doctest::Approx(-kappa[i]).epsilon(1e-13));

  // constant curvature makes the energy integral exact: W = kb A kappa^2 / 2
  BendingEnergy be = bending_energy(space, zero, kappa, PhysicalParams{1.0, 0.0});
  CHECK(be.W == doctest::Approx(kappa_exact * kappa_exact * meas.total_area / 2.0).epsilon(1e-9));
  CHECK(be.W == doctest::Approx(27.6696).epsilon(1e-4));  // frozen reference
  CHECK(be.Estar == doctest::Approx(be.W / (8.0 * M_PI)).epsilon(1e-13));
}

TEST_CASE("spontaneous curvature shifts the energy by the exact offset") {
  SurfaceMesh m = generate_icosphere(0, 1.0);
  DeformationState zero(m);
  ScalarSpace space(m, 1);
  std::vector<double> kappa = solve_state(space, zero);
  double kbar = kappa[0];
  MeshMeasures meas = measure(m, zero);
  for (double H0 : {-0.5, 0.0, 1.3}) {
    BendingEnergy be = bending_energy(space, zero, kappa, PhysicalParams{0.7, H0});
    double expected = 2.0 * 0.7 * meas.total_area * std::pow(0.5 * kbar - H0, 2);
    CHECK(be.W == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("sphere curvature approaches -2/R under refinement") {
  for (double radius : {1.0, 2.0}) {
    SurfaceMesh m = generate_icosphere(3, radius);
    DeformationState zero(m);
    ScalarSpace space(m, 1);
    std::vector<double> kappa = solve_state(space, zero);
    double mean = std::accumulate(kappa.begin(), kappa.end(), 0.0) / kappa.size();
    CHECK(mean == doctest::Approx(-2.0 / radius).epsilon(0.01));
  }
}

TEST_CASE("curved second-order elements resolve the sphere curvature pointwise") {
  ShapeParams params;
  params.order = 2;
  SurfaceMesh m = generate_benchmark_shape(ShapeKind::Sphere, 3, params);
  DeformationState zero(m);
  ScalarSpace space(m, 2);
  std::vector<double> kappa = solve_state(space, zero);
  for (double k : kappa) CHECK(k == doctest::Approx(-2.0).epsilon(0.05));
  CurvatureErrors errs = curvature_errors(space, zero, kappa, [](const Vec3&) { return -2.0; });
  CHECK(errs.L2 < 0.03);
  CHECK(errs.Hminus1 < errs.L2);
}

TEST_CASE("averaged normal field is the normalized element-normal average (affine)") {
  SurfaceMesh m = generate_icosphere(1, 1.0);
  DeformationState zero(m);
  AveragedNormalField normals(m, zero);
  CHECK(normals.poly_order() == 0);
  for (int e = 0; e < m.num_edges(); e += 7) {
    const EdgeRecord& rec = m.edges[e];
    ElementGeometry gl(m, &zero, rec.left), gr(m, &zero, rec.right);
    Vec3 expected = normalized(gl.sample(0.3, 0.3).nu + gr.sample(0.3, 0.3).nu);
    for (double s : {0.1, 0.5, 0.9}) {
      Vec3 v = normals.eval(e, s);
      CHECK(std::abs(norm(v) - 1.0) < 1e-13);
      CHECK(norm(v - expected) < 1e-13);
    }
  }
}

TEST_CASE("averaged normal evaluation is unit length on curved meshes") {
  ShapeParams params;
  params.order = 2;
  SurfaceMesh m = generate_benchmark_shape(ShapeKind::Prolate, 1, params);
  DeformationState zero(m);
  AveragedNormalField normals(m, zero);
  CHECK(normals.poly_order() == 1);
  for (int e = 0; e < m.num_edges(); e += 5)
    for (double s : {0.0, 0.3, 1.0}) CHECK(std::abs(norm(normals.eval(e, s)) - 1.0) < 1e-13);
}

TEST_CASE("no arcsin clamping on well-resolved meshes") {
  SurfaceMesh m = generate_icosphere(2, 1.0);
  DeformationState zero(m);
  ScalarSpace space(m, 1);
  AveragedNormalField normals(m, zero);
  int clamps = 0;
  assemble_lift_rhs(space, zero, normals, &clamps);
  CHECK(clamps == 0);
}

TEST_CASE("error measures vanish when the reference equals the field") {
  SurfaceMesh m = generate_icosphere(1, 1.0);
  DeformationState zero(m);
  ScalarSpace space(m, 1);
  std::vector<double> constant(space.dim(), -1.7);
  CurvatureErrors errs = curvature_errors(space, zero, constant, [](const Vec3&) { return -1.7; });
  CHECK(errs.L2 < 1e-10);
  CHECK(errs.Hminus1 < 1e-8);
}
