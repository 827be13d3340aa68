#pragma once

#include <functional>
#include <vector>

#include "memopt/geometry.hpp"
#include "memopt/space.hpp"

namespace memopt {

struct PhysicalParams {
  double kb = 0.01;  // bending modulus
  double H0 = 0.0;   // spontaneous curvature
};

/// Edge-wise polynomial field of order k-1 approximating nu_L + nu_R; values
/// are normalized at evaluation time. For affine geometry (k = 1) this is the
/// constant normalized average of the two element normals.
class AveragedNormalField {
 public:
  AveragedNormalField(const SurfaceMesh& mesh, const DeformationState& deformation);

  /// Unit averaged normal at parameter s along the edge direction v0 -> v1.
  Vec3 eval(int edge, double s) const;

  int poly_order() const { return order_; }

 private:
  int order_;                // 0 (constant) or 1 (linear)
  std::vector<Vec3> coeff_;  // (order+1) nodal values per edge, unnormalized
};

/// Convenience wrapper matching the single-point query interface.
Vec3 averaged_normal(const SurfaceMesh& mesh, const DeformationState& deformation, int edge,
                     double s);

/// Right-hand side of the curvature lift:
/// rhs_i = -sum_T [ int_T tr(dnu) phi_i + int_dT arcsin(mu . <nu>) phi_i ].
/// clamp_warnings (optional) counts arcsin arguments clamped by more than 1e-12.
std::vector<double> assemble_lift_rhs(const ScalarSpace& space,
                                      const DeformationState& deformation,
                                      const AveragedNormalField& normals,
                                      int* clamp_warnings = nullptr);

/// Lifted distributional mean curvature kappa: M kappa = lift rhs.
/// Sign convention: kappa = -2 on the unit sphere; a convex surface has
/// int kappa < 0. The plotted mean curvature is |kappa|/2.
std::vector<double> solve_state(const ScalarSpace& space, const DeformationState& deformation);

/// Lagrange multiplier sigma = L2 projection of -2 kb (kappa/2 - H0); exact
/// nodal formula since the projected function lies in the same space.
std::vector<double> solve_adjoint(const std::vector<double>& kappa, const PhysicalParams& params);

struct BendingEnergy {
  double W = 0.0;      // 2 kb int (kappa/2 - H0)^2
  double Estar = 0.0;  // W / (8 pi kb)
};

BendingEnergy bending_energy(const ScalarSpace& space, const DeformationState& deformation,
                             const std::vector<double>& kappa, const PhysicalParams& params);

struct CurvatureErrors {
  double L2 = 0.0;
  double Hminus1 = 0.0;
};

/// L2 and H^-1 distances between kappa and a pointwise reference. The H^-1
/// norm solves the regularized dual problem (grad u, grad v) + eps (u, v) =
/// <kappa - kappa_ref, v> in order k+1; the rhs is split into its mean and a
/// mean-free part so the eps = 1e-10 regularization cannot amplify the
/// constant mode.
CurvatureErrors curvature_errors(const ScalarSpace& space, const DeformationState& deformation,
                                 const std::vector<double>& kappa,
                                 const std::function<double(const Vec3&)>& kappa_ref);

}  // namespace memopt
