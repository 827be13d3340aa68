#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "memopt/vec3.hpp"

namespace memopt {

/// One undirected mesh edge. The left triangle traverses (v0, v1) in that
/// order, the right one in reverse. local index = position of the edge within
/// the triangle (edge e runs from local vertex e to (e+1)%3).
struct EdgeRecord {
  int v0 = -1, v1 = -1;
  int left = -1, right = -1;
  int left_local = -1, right_local = -1;
};

/// Closed oriented triangle mesh, counter-clockwise seen from outside.
/// Immutable after construction; geometry changes live in DeformationState.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<EdgeRecord> edges;
  std::vector<std::array<int, 3>> triangle_edges;  // edge index per local edge
  int geometry_order = 1;
  std::vector<Vec3> edge_midpoint_nodes;  // one per edge iff geometry_order == 2

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  /// Geometry nodes: vertices, then (order 2) edge midpoints.
  int num_geometry_nodes() const {
    return num_vertices() + (geometry_order == 2 ? num_edges() : 0);
  }
  Vec3 geometry_node(int i) const {
    return i < num_vertices() ? vertices[i] : edge_midpoint_nodes[i - num_vertices()];
  }

  double mean_edge_length() const;
};

/// Builds edge records and the per-triangle edge table; throws StructuralError
/// on non-manifold edges or inconsistent orientation.
std::vector<EdgeRecord> build_edge_adjacency(const std::vector<std::array<int, 3>>& triangles);

/// Fills edges/triangle_edges of a mesh whose vertices/triangles are set.
void finalize_connectivity(SurfaceMesh& mesh);

/// Regular icosahedron (circumradius = radius) with `subdivisions` rounds of
/// 4-way splits, new vertices projected back to the sphere. subdivisions <= 8.
SurfaceMesh generate_icosphere(int subdivisions, double radius);

enum class ShapeKind { Sphere, Prolate, Oblate, Biconcave };

struct ShapeParams {
  double radius = 1.0;       // sphere
  double c = 1.1017;         // symmetry semi-axis (prolate: x, oblate: z)
  double a = 0.95;           // equatorial semi-axis
  double jitter = 0.0;       // tangential noise, relative to mean edge length
  std::uint64_t seed = 20240317;
  int order = 1;             // geometry order 1 or 2
};

/// Icosphere control mesh mapped onto the benchmark surface. order == 2 curves
/// edge midpoints through the exact parametrization of the shape.
SurfaceMesh generate_benchmark_shape(ShapeKind kind, int subdivisions, const ShapeParams& params);

/// Biconcave height profile F(p) = 0.54353 p + 0.121435 p^3 - 0.561365 p^5.
double biconcave_profile(double p);

/// Maps a point of the unit sphere to the benchmark surface.
Vec3 benchmark_map(ShapeKind kind, const ShapeParams& params, const Vec3& unit_point);

/// Adds quadratic edge midpoint nodes: each node is the projector image of the
/// straight-edge midpoint. Throws ConfigError if already order 2 and
/// DegeneracyError on a non-finite projector result.
SurfaceMesh curve_to_quadratic(const SurfaceMesh& mesh, const std::function<Vec3(const Vec3&)>& projector);

ShapeKind parse_shape_kind(const std::string& name);

}  // namespace memopt
