#include "memopt/space.hpp"

#include "memopt/errors.hpp"

namespace memopt {

namespace {

constexpr double kLambdaGrad[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};

}  // namespace

ScalarSpace::ScalarSpace(const SurfaceMesh& m, int k) : mesh(&m), order(k) {
  if (k < 1 || k > 3) throw ConfigError("ScalarSpace: order must be 1, 2, or 3");
}

int ScalarSpace::dim() const {
  int v = mesh->num_vertices(), e = mesh->num_edges(), f = mesh->num_triangles();
  if (order == 1) return v;
  if (order == 2) return v + e;
  return v + 2 * e + f;
}

void ScalarSpace::element_dofs(int t, std::array<int, 10>& dofs) const {
  const auto& tri = mesh->triangles[t];
  int v = mesh->num_vertices(), ne = mesh->num_edges();
  for (int i = 0; i < 3; ++i) dofs[i] = tri[i];
  if (order == 1) return;
  if (order == 2) {
    for (int e = 0; e < 3; ++e) dofs[3 + e] = v + mesh->triangle_edges[t][e];
    return;
  }
  for (int e = 0; e < 3; ++e) {
    int idx = mesh->triangle_edges[t][e];
    bool forward = mesh->edges[idx].v0 == tri[e];
    // global edge nodes: [closer to v0, closer to v1]
    dofs[3 + 2 * e + 0] = v + 2 * idx + (forward ? 0 : 1);
    dofs[3 + 2 * e + 1] = v + 2 * idx + (forward ? 1 : 0);
  }
  dofs[9] = v + 2 * ne + t;
}

void ScalarSpace::eval_basis(int, double x, double y, double* phi) const {
  double l[3] = {1.0 - x - y, x, y};
  if (order == 1) {
    for (int i = 0; i < 3; ++i) phi[i] = l[i];
    return;
  }
  if (order == 2) {
    for (int i = 0; i < 3; ++i) phi[i] = l[i] * (2.0 * l[i] - 1.0);
    for (int e = 0; e < 3; ++e) phi[3 + e] = 4.0 * l[e] * l[(e + 1) % 3];
    return;
  }
  for (int i = 0; i < 3; ++i) phi[i] = 0.5 * l[i] * (3.0 * l[i] - 1.0) * (3.0 * l[i] - 2.0);
  for (int e = 0; e < 3; ++e) {
    double la = l[e], lb = l[(e + 1) % 3];
    phi[3 + 2 * e + 0] = 4.5 * la * lb * (3.0 * la - 1.0);
    phi[3 + 2 * e + 1] = 4.5 * la * lb * (3.0 * lb - 1.0);
  }
  phi[9] = 27.0 * l[0] * l[1] * l[2];
}

void ScalarSpace::eval_basis_grad(int, double x, double y, std::array<double, 2>* grad) const {
  double l[3] = {1.0 - x - y, x, y};
  auto g = [&](int i, int d) { return kLambdaGrad[i][d]; };
  if (order == 1) {
    for (int i = 0; i < 3; ++i)
      for (int d = 0; d < 2; ++d) grad[i][d] = g(i, d);
    return;
  }
  if (order == 2) {
    for (int i = 0; i < 3; ++i)
      for (int d = 0; d < 2; ++d) grad[i][d] = (4.0 * l[i] - 1.0) * g(i, d);
    for (int e = 0; e < 3; ++e) {
      int a = e, b = (e + 1) % 3;
      for (int d = 0; d < 2; ++d) grad[3 + e][d] = 4.0 * (l[b] * g(a, d) + l[a] * g(b, d));
    }
    return;
  }
  for (int i = 0; i < 3; ++i) {
    double li = l[i];
    double dphi = 0.5 * ((3.0 * li - 1.0) * (3.0 * li - 2.0) + 3.0 * li * (3.0 * li - 2.0) +
                         3.0 * li * (3.0 * li - 1.0));
    for (int d = 0; d < 2; ++d) grad[i][d] = dphi * g(i, d);
  }
  for (int e = 0; e < 3; ++e) {
    int a = e, b = (e + 1) % 3;
    double la = l[a], lb = l[b];
    for (int d = 0; d < 2; ++d) {
      grad[3 + 2 * e + 0][d] =
          4.5 * (lb * (3.0 * la - 1.0) * g(a, d) + la * (3.0 * la - 1.0) * g(b, d) +
                 3.0 * la * lb * g(a, d));
      grad[3 + 2 * e + 1][d] =
          4.5 * (lb * (3.0 * lb - 1.0) * g(a, d) + la * (3.0 * lb - 1.0) * g(b, d) +
                 3.0 * la * lb * g(b, d));
    }
  }
  for (int d = 0; d < 2; ++d)
    grad[9][d] = 27.0 * (l[1] * l[2] * g(0, d) + l[0] * l[2] * g(1, d) + l[0] * l[1] * g(2, d));
}

}  // namespace memopt
