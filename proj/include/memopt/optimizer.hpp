#pragma once

#include <functional>
#include <string>
#include <vector>

#include "memopt/shape_derivative.hpp"
#include "memopt/sparse.hpp"

namespace memopt {

enum class GradientMode { H1, Stokes };

struct OptimizerConfig {
  PhysicalParams params;
  ConstraintParams constraints;  // A0/V0/T0 measured from the start shape when unset
  double alpha_init = 0.025;
  double alpha_max = 0.1;
  double alpha_factor = 1.0;  // step growth on accepted steps
  int max_iterations = 100;
  double grad_tol = 1e-12;  // relative to the initial gradient norm
  double step_tol = 1e-11;  // stop when alpha falls below
  double cost_tol = 1e-10;
  int nonmonotone_window = 0;  // 0 = monotone acceptance
  GradientMode gradient_mode = GradientMode::H1;
  double metric_epsilon = 1e-10;
  bool spontaneous_sign_flip = false;  // compare H0 against -kappa/2 instead of kappa/2
  int continuation_rounds = 1;         // penalty-increase restarts
  double continuation_factor = 1.0;
};

struct CostBreakdown {
  double J = 0.0, W = 0.0, Estar = 0.0;
  double area_term = 0.0, volume_term = 0.0, local_term = 0.0;
  double area = 0.0, volume = 0.0, reduced_volume = 0.0;
};

struct IterationRecord {
  int iter = 0;
  double J = 0.0, W = 0.0, Estar = 0.0;
  double area = 0.0, volume = 0.0, reduced_volume = 0.0;
  double grad_norm = 0.0, alpha = 0.0;
  int rejects = 0;  // rejections since the previous accepted step
};

struct RunLog {
  std::vector<IterationRecord> records;
  bool converged = false;
  std::string stop_reason;
};

/// Penalized cost J = W + penalty terms; kappa must be solved on this
/// deformation. Also reports area, volume, and reduced volume.
CostBreakdown cost(const ScalarSpace& space, const DeformationState& deformation,
                   const std::vector<double>& kappa, const PhysicalParams& params,
                   const ConstraintParams& constraints);

/// Riesz representative of the load in the H1(eps) metric.
std::vector<double> riesz_gradient(const CsrMatrix& metric, const std::vector<double>& load);

/// Divergence-free Riesz representative via a Taylor-Hood Stokes saddle
/// (order 2 velocity, order 1 pressure); requires order 2 geometry.
std::vector<double> riesz_gradient_div_free(const SurfaceMesh& mesh,
                                            const DeformationState& deformation,
                                            const std::vector<double>& load, double epsilon);

struct OptimizeResult {
  RunLog log;
  DeformationState deformation;
  std::vector<double> kappa;
  std::vector<double> sigma;
};

/// Called after every accepted iteration (e.g. for CSV/VTK emission).
using IterationCallback = std::function<void(const IterationRecord&, const DeformationState&)>;

/// Gradient descent with step-halving line search on the penalized bending
/// cost (state re-solved on every candidate).
OptimizeResult optimize(const SurfaceMesh& mesh, OptimizerConfig config,
                        const IterationCallback& callback = {});

}  // namespace memopt
