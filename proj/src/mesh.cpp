#include "memopt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "memopt/errors.hpp"

namespace memopt {

double SurfaceMesh::mean_edge_length() const {
  double total = 0.0;
  for (const auto& e : edges) total += norm(vertices[e.v1] - vertices[e.v0]);
  return edges.empty() ? 0.0 : total / static_cast<double>(edges.size());
}

std::vector<EdgeRecord> build_edge_adjacency(const std::vector<std::array<int, 3>>& triangles) {
  std::map<std::pair<int, int>, EdgeRecord> by_key;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
    for (int e = 0; e < 3; ++e) {
      int a = triangles[t][e], b = triangles[t][(e + 1) % 3];
      auto key = std::minmax(a, b);
      auto& rec = by_key[key];
      if (a < b) {
        if (rec.left >= 0)
          throw StructuralError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                "): inconsistent orientation or non-manifold");
        rec.v0 = a;
        rec.v1 = b;
        rec.left = t;
        rec.left_local = e;
      } else {
        if (rec.right >= 0)
          throw StructuralError("edge (" + std::to_string(b) + "," + std::to_string(a) +
                                "): inconsistent orientation or non-manifold");
        rec.v0 = b;
        rec.v1 = a;
        rec.right = t;
        rec.right_local = e;
      }
    }
  }
  std::vector<EdgeRecord> edges;
  edges.reserve(by_key.size());
  for (auto& [key, rec] : by_key) {
    if (rec.left < 0 || rec.right < 0)
      throw StructuralError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                            "): boundary edge, surface is not closed");
    edges.push_back(rec);
  }
  return edges;
}

void finalize_connectivity(SurfaceMesh& mesh) {
  mesh.edges = build_edge_adjacency(mesh.triangles);
  mesh.triangle_edges.assign(mesh.triangles.size(), {-1, -1, -1});
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const auto& e = mesh.edges[i];
    mesh.triangle_edges[e.left][e.left_local] = i;
    mesh.triangle_edges[e.right][e.right_local] = i;
  }
}

namespace {

SurfaceMesh unit_icosahedron() {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  const double s = 1.0 / std::sqrt(1.0 + phi * phi);
  SurfaceMesh mesh;
  const double v[12][3] = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                           {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                           {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& p : v) mesh.vertices.push_back({p[0] * s, p[1] * s, p[2] * s});
  const int f[20][3] = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (const auto& t : f) mesh.triangles.push_back({t[0], t[1], t[2]});
  return mesh;
}

void subdivide_once(SurfaceMesh& mesh) {
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int idx = mesh.num_vertices();
    mesh.vertices.push_back(normalized(0.5 * (mesh.vertices[a] + mesh.vertices[b])));
    midpoint.emplace(key, idx);
    return idx;
  };
  std::vector<std::array<int, 3>> next;
  next.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
    next.push_back({t[0], ab, ca});
    next.push_back({t[1], bc, ab});
    next.push_back({t[2], ca, bc});
    next.push_back({ab, bc, ca});
  }
  mesh.triangles = std::move(next);
}

SurfaceMesh unit_icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 8)
    throw ConfigError("generate_icosphere: subdivisions must be in [0, 8], got " +
                      std::to_string(subdivisions));
  SurfaceMesh mesh = unit_icosahedron();
  for (int s = 0; s < subdivisions; ++s) subdivide_once(mesh);
  finalize_connectivity(mesh);
  return mesh;
}

void jitter_on_unit_sphere(SurfaceMesh& mesh, double jitter, std::uint64_t seed) {
  if (jitter == 0.0) return;
  double h = mesh.mean_edge_length();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (auto& p : mesh.vertices) {
    Vec3 n = normalized(p);
    Vec3 r{uni(rng), uni(rng), uni(rng)};
    Vec3 t = r - dot(r, n) * n;
    p = normalized(p + jitter * h * t);
  }
}

}  // namespace

double biconcave_profile(double p) {
  return 0.54353 * p + 0.121435 * p * p * p - 0.561365 * p * p * p * p * p;
}

Vec3 benchmark_map(ShapeKind kind, const ShapeParams& params, const Vec3& u) {
  switch (kind) {
    case ShapeKind::Sphere:
      return params.radius * u;
    case ShapeKind::Prolate:
      return {params.c * u.x, params.a * u.y, params.a * u.z};
    case ShapeKind::Oblate:
      return {params.a * u.x, params.a * u.y, params.c * u.z};
    case ShapeKind::Biconcave:
      return {u.x, u.y, biconcave_profile(u.z)};
  }
  throw ConfigError("unknown shape kind");
}

SurfaceMesh generate_icosphere(int subdivisions, double radius) {
  if (!(radius > 0.0)) throw ConfigError("generate_icosphere: radius must be positive");
  SurfaceMesh mesh = unit_icosphere(subdivisions);
  for (auto& p : mesh.vertices) p *= radius;
  return mesh;
}

SurfaceMesh generate_benchmark_shape(ShapeKind kind, int subdivisions, const ShapeParams& params) {
  if ((kind == ShapeKind::Prolate || kind == ShapeKind::Oblate) && (params.a <= 0.0 || params.c <= 0.0))
    throw ConfigError("generate_benchmark_shape: semi-axes must be positive");
  if (kind == ShapeKind::Sphere && params.radius <= 0.0)
    throw ConfigError("generate_benchmark_shape: radius must be positive");
  if (params.order != 1 && params.order != 2)
    throw ConfigError("generate_benchmark_shape: geometry order must be 1 or 2");

  SurfaceMesh unit = unit_icosphere(subdivisions);
  jitter_on_unit_sphere(unit, params.jitter, params.seed);

  SurfaceMesh mesh = unit;
  for (int i = 0; i < mesh.num_vertices(); ++i)
    mesh.vertices[i] = benchmark_map(kind, params, unit.vertices[i]);
  if (params.order == 2) {
    mesh.geometry_order = 2;
    mesh.edge_midpoint_nodes.resize(mesh.num_edges());
    for (int i = 0; i < mesh.num_edges(); ++i) {
      const auto& e = mesh.edges[i];
      Vec3 m = normalized(0.5 * (unit.vertices[e.v0] + unit.vertices[e.v1]));
      mesh.edge_midpoint_nodes[i] = benchmark_map(kind, params, m);
    }
  }
  return mesh;
}

SurfaceMesh curve_to_quadratic(const SurfaceMesh& mesh, const std::function<Vec3(const Vec3&)>& projector) {
  if (mesh.geometry_order != 1) throw ConfigError("curve_to_quadratic: mesh is already order 2");
  SurfaceMesh curved = mesh;
  curved.geometry_order = 2;
  curved.edge_midpoint_nodes.resize(mesh.num_edges());
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const auto& e = mesh.edges[i];
    Vec3 m = projector(0.5 * (mesh.vertices[e.v0] + mesh.vertices[e.v1]));
    if (!std::isfinite(m.x) || !std::isfinite(m.y) || !std::isfinite(m.z))
      throw DegeneracyError("curve_to_quadratic: projector failed on edge " + std::to_string(i));
    curved.edge_midpoint_nodes[i] = m;
  }
  return curved;
}

ShapeKind parse_shape_kind(const std::string& name) {
  if (name == "sphere") return ShapeKind::Sphere;
  if (name == "prolate") return ShapeKind::Prolate;
  if (name == "oblate") return ShapeKind::Oblate;
  if (name == "biconcave") return ShapeKind::Biconcave;
  throw ConfigError("unknown shape kind '" + name + "'");
}

}  // namespace memopt
