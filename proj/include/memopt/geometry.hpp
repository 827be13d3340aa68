#pragma once

#include <vector>

#include "memopt/mesh.hpp"
#include "memopt/vec3.hpp"

namespace memopt {

/// Total displacement over the reference mesh geometry nodes (ALE); the
/// reference mesh is never mutated. Layout: dof 3*node + component.
struct DeformationState {
  const SurfaceMesh* mesh = nullptr;
  std::vector<double> displacement;

  DeformationState() = default;
  explicit DeformationState(const SurfaceMesh& m)
      : mesh(&m), displacement(3 * m.num_geometry_nodes(), 0.0) {}

  Vec3 node_displacement(int node) const {
    return {displacement[3 * node], displacement[3 * node + 1], displacement[3 * node + 2]};
  }
};

/// Geometry data at one reference point of a (deformed) element.
struct ElemSample {
  Vec3 x;             // physical point
  Vec3 nu;            // unit outward normal
  double dA;          // physical area density w.r.t. reference-triangle measure
  double w_ratio;     // w_t: deformed / undeformed area density
  Vec3 b[2];          // grad_S f = g0*b[0] + g1*b[1] for reference gradient (g0, g1)
  Mat3 A;             // gradient transform; A^T(0) = I - nu (x) nu
  Mat3 dnu;           // surface Jacobian of the normal field (zero on affine elements)
  double tr_dnu = 0;  // trace of dnu
};

/// Geometry data at one point of an element edge, parametrized by s in [0,1]
/// along the element's counter-clockwise boundary traversal.
struct EdgeSample {
  Vec3 x;
  Vec3 t_ccw;      // unit tangent along the traversal
  Vec3 nu;         // element normal at the point
  Vec3 mu;         // unit co-normal pointing out of the element
  double dL;       // physical length density w.r.t. ds
  double w_ratio;  // w_t^E: deformed / undeformed length density
  Vec3 b[2];       // surface-gradient factors of the element at this point
  double ref[2];   // reference coordinates within the element
};

/// Orthonormal frame with mu = nu x tau pointing out of the element.
struct Frame {
  Vec3 nu, tau, mu;
};

/// Per-element geometry evaluator; gathers the (deformed) nodes once.
class ElementGeometry {
 public:
  ElementGeometry(const SurfaceMesh& mesh, const DeformationState* deformation, int triangle);

  ElemSample sample(double x, double y) const;
  EdgeSample edge_sample(int local_edge, double s) const;

  int order() const { return order_; }

 private:
  int order_;
  int nnodes_;
  Vec3 nodes_[6];      // deformed
  Vec3 ref_nodes_[6];  // undeformed
  Vec3 hess_[3];       // d2x/dxi2 of the deformed map: (11, 12, 22); zero for order 1
  int triangle_;
};

struct MeshMeasures {
  double total_area = 0.0;
  double enclosed_volume = 0.0;
  std::vector<double> element_areas;
};

/// Areas and enclosed volume (1/3 int x . nu ds) of the deformed surface.
/// Throws DegeneracyError when an element area collapses below
/// 1e-12 x mean element area.
MeshMeasures measure(const SurfaceMesh& mesh, const DeformationState& deformation);

/// Frame of the deformed geometry at reference position s on a local edge.
Frame element_frame(const SurfaceMesh& mesh, const DeformationState& deformation, int triangle,
                    int local_edge, double s);

/// Maps a global edge parameter (along record direction v0 -> v1) to the local
/// parameter of the given side's traversal, and back (the map is s or 1-s).
inline double edge_param_to_local(const EdgeRecord& e, int triangle, double s_global) {
  return (e.left == triangle) ? s_global : 1.0 - s_global;
}

}  // namespace memopt
