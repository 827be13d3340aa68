#pragma once

#include <functional>
#include <vector>

#include "memopt/curvature.hpp"
#include "memopt/geometry.hpp"
#include "memopt/space.hpp"

namespace memopt {

enum class NormalizationMode { Paper, Supplementary };
enum class DerivativeMode { Full, LowestOrder };

/// Penalty weights and reference quantities of the constrained cost
///   J = W + cA (A-A0)^2 nA + cV (V-V0)^2 nV + sum_T cAloc (|T|-|T0|)^2 nT.
/// Supplementary mode normalizes by the reference quantities
/// (nA, nV, nT) = (1/A0, 1/V0, 1/|T0|); paper mode uses (1, 1, 1).
struct ConstraintParams {
  double cA = 0.0, cV = 0.0, cAloc = 0.0;
  double A0 = 0.0;
  double V0 = 0.0;         // goal volume
  std::vector<double> T0;  // reference element areas (empty disables local term)
  NormalizationMode mode = NormalizationMode::Supplementary;

  double area_norm() const { return mode == NormalizationMode::Paper ? 1.0 : 1.0 / A0; }
  double volume_norm() const { return mode == NormalizationMode::Paper ? 1.0 : 1.0 / V0; }
  double local_norm(int t) const { return mode == NormalizationMode::Paper ? 1.0 : 1.0 / T0[t]; }
};

/// Shape derivative of the lifted-curvature equation part of the Lagrangian,
/// as a load vector over the interleaved vector space (dof 3*i + comp).
std::vector<double> assemble_equation_diff(const VectorSpace& space,
                                           const DeformationState& deformation,
                                           const std::vector<double>& kappa,
                                           const std::vector<double>& sigma,
                                           const AveragedNormalField& normals,
                                           DerivativeMode mode = DerivativeMode::Full,
                                           int* denominator_warnings = nullptr);

/// Shape derivative of bending energy + penalty terms.
std::vector<double> assemble_cost_diff(const VectorSpace& space,
                                       const DeformationState& deformation,
                                       const std::vector<double>& kappa,
                                       const PhysicalParams& params,
                                       const ConstraintParams& constraints);

/// Full first shape derivative D J(X); LowestOrder uses the simplified affine
/// formula and is rejected on curved (order 2) geometry.
std::vector<double> shape_derivative_total(const VectorSpace& space,
                                           const DeformationState& deformation,
                                           const std::vector<double>& kappa,
                                           const std::vector<double>& sigma,
                                           const PhysicalParams& params,
                                           const ConstraintParams& constraints,
                                           DerivativeMode mode = DerivativeMode::Full);

/// Adds scale * field (vector-space coefficients) onto the displacement; valid
/// when the space order matches the geometry order so dof layouts coincide.
void apply_displacement(DeformationState& deformation, const std::vector<double>& field,
                        double scale);

struct FdLadderEntry {
  double t = 0.0;
  double fd_value = 0.0;
  double analytic = 0.0;
  double abs_err = 0.0;
  bool skipped = false;  // degenerate geometry at this step size
};

struct FdReport {
  std::vector<FdLadderEntry> entries;
  double observed_order = 0.0;  // from the last two valid ladder entries
};

/// Central-difference validation of an assembled derivative: for each t,
/// compares (J(d + tX) - J(d - tX)) / (2t) against analytic = load . probe.
FdReport finite_difference_check(const std::function<double(const DeformationState&)>& cost,
                                 const DeformationState& base, const std::vector<double>& probe,
                                 double analytic, const std::vector<double>& t_ladder);

}  // namespace memopt
