#include "memopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "memopt/assembly.hpp"
#include "memopt/errors.hpp"
#include "memopt/solvers.hpp"

namespace memopt {

namespace {

double reduced_volume(double area, double volume) {
  return volume / ((4.0 * M_PI / 3.0) * std::pow(area / (4.0 * M_PI), 1.5));
}

PhysicalParams effective_params(const OptimizerConfig& config) {
  PhysicalParams p = config.params;
  if (config.spontaneous_sign_flip) p.H0 = -p.H0;  // (−κ/2 − H0)² = (κ/2 + H0)²
  return p;
}

}  // namespace

CostBreakdown cost(const ScalarSpace& space, const DeformationState& deformation,
                   const std::vector<double>& kappa, const PhysicalParams& params,
                   const ConstraintParams& constraints) {
  CostBreakdown c;
  BendingEnergy be = bending_energy(space, deformation, kappa, params);
  c.W = be.W;
  c.Estar = be.Estar;
  MeshMeasures m = measure(*space.mesh, deformation);
  c.area = m.total_area;
  c.volume = m.enclosed_volume;
  c.reduced_volume = reduced_volume(c.area, c.volume);
  if (constraints.cA != 0.0) {
    double r = c.area - constraints.A0;
    c.area_term = constraints.cA * r * r * constraints.area_norm();
  }
  if (constraints.cV != 0.0) {
    double r = c.volume - constraints.V0;
    c.volume_term = constraints.cV * r * r * constraints.volume_norm();
  }
  if (constraints.cAloc != 0.0 && !constraints.T0.empty()) {
    for (int t = 0; t < space.mesh->num_triangles(); ++t) {
      double r = m.element_areas[t] - constraints.T0[t];
      c.local_term += constraints.cAloc * r * r * constraints.local_norm(t);
    }
  }
  c.J = c.W + c.area_term + c.volume_term + c.local_term;
  return c;
}

std::vector<double> riesz_gradient(const CsrMatrix& metric, const std::vector<double>& load) {
  std::vector<double> x;
  solve_spd(metric, load, x, 1e-10);
  return x;
}

std::vector<double> riesz_gradient_div_free(const SurfaceMesh& mesh,
                                            const DeformationState& deformation,
                                            const std::vector<double>& load, double epsilon) {
  if (mesh.geometry_order != 2)
    throw ConfigError("divergence-free gradient requires order 2 geometry (Taylor-Hood)");
  VectorSpace velocity(mesh, 2);
  ScalarSpace pressure(mesh, 1);
  if (static_cast<int>(load.size()) != velocity.dim())
    throw StructuralError("riesz_gradient_div_free: load size mismatch");
  CsrMatrix a = assemble_h1_metric(velocity, epsilon, deformation);
  TripletList b = assemble_divergence(velocity.scalar, pressure, deformation);

  const int nv = velocity.dim(), np = pressure.dim(), n = nv + np;
  DenseMatrix saddle(n, n);
  for (int r = 0; r < a.rows; ++r)
    for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) saddle(r, a.col[k]) = a.val[k];
  for (std::size_t k = 0; k < b.v.size(); ++k) {
    saddle(nv + b.i[k], b.j[k]) += b.v[k];
    saddle(b.j[k], nv + b.i[k]) += b.v[k];
  }
  std::vector<double> rhs(n, 0.0);
  std::copy(load.begin(), load.end(), rhs.begin());
  lu_solve(saddle, rhs);
  rhs.resize(nv);
  return rhs;
}

OptimizeResult optimize(const SurfaceMesh& mesh, OptimizerConfig config,
                        const IterationCallback& callback) {
  const int order = mesh.geometry_order;
  if (config.gradient_mode == GradientMode::Stokes && order != 2)
    throw ConfigError("gradient_mode = stokes requires an order 2 (curved) mesh");
  if (!(config.params.kb > 0.0)) throw ConfigError("bending modulus kb must be positive");
  if (!(config.alpha_init > 0.0) || config.alpha_init > config.alpha_max)
    throw ConfigError("alpha must satisfy 0 < alpha <= alpha_max");

  ScalarSpace space(mesh, order);
  VectorSpace vspace(mesh, order);
  PhysicalParams params = effective_params(config);

  OptimizeResult result;
  result.deformation = DeformationState(mesh);

  // Reference quantities default to the start shape.
  MeshMeasures m0 = measure(mesh, result.deformation);
  if (config.constraints.A0 <= 0.0) config.constraints.A0 = m0.total_area;
  if (config.constraints.V0 <= 0.0) config.constraints.V0 = m0.enclosed_volume;
  if (config.constraints.T0.empty()) config.constraints.T0 = m0.element_areas;

  result.kappa = solve_state(space, result.deformation);
  CostBreakdown current = cost(space, result.deformation, result.kappa, params,
                               config.constraints);

  int iter = 0;
  for (int round = 0; round < std::max(1, config.continuation_rounds); ++round) {
    if (round > 0) {
      config.constraints.cA *= config.continuation_factor;
      config.constraints.cV *= config.continuation_factor;
      config.constraints.cAloc *= config.continuation_factor;
      current = cost(space, result.deformation, result.kappa, params, config.constraints);
    }
    double alpha = config.alpha_init;
    double grad_norm0 = -1.0;
    std::deque<double> history;  // accepted costs, newest last
    history.push_back(current.J);
    int rejects = 0;

    while (iter < config.max_iterations) {
      result.sigma = solve_adjoint(result.kappa, params);
      std::vector<double> load =
          shape_derivative_total(vspace, result.deformation, result.kappa, result.sigma, params,
                                 config.constraints);
      std::vector<double> grad;
      if (config.gradient_mode == GradientMode::Stokes) {
        grad = riesz_gradient_div_free(mesh, result.deformation, load, config.metric_epsilon);
      } else {
        CsrMatrix metric = assemble_h1_metric(vspace, config.metric_epsilon, result.deformation);
        grad = riesz_gradient(metric, load);
      }
      double grad_norm = 0.0;
      for (std::size_t i = 0; i < grad.size(); ++i) grad_norm += grad[i] * load[i];
      grad_norm = std::sqrt(std::max(0.0, grad_norm));
      if (grad_norm0 < 0.0) grad_norm0 = grad_norm;

      if (grad_norm <= config.grad_tol * grad_norm0) {
        result.log.converged = true;
        result.log.stop_reason = "gradient norm below tolerance";
        break;
      }
      if (current.J <= config.cost_tol) {
        result.log.converged = true;
        result.log.stop_reason = "cost below tolerance";
        break;
      }

      // Step-halving line search against the (non-)monotone reference.
      bool accepted = false;
      while (alpha >= config.step_tol) {
        double reference = history.back();
        if (config.nonmonotone_window > 0)
          reference = *std::max_element(history.begin(), history.end());
        try {
          DeformationState candidate = result.deformation;
          apply_displacement(candidate, grad, -alpha);
          std::vector<double> kappa_cand = solve_state(space, candidate);
          CostBreakdown cand =
              cost(space, candidate, kappa_cand, params, config.constraints);
          if (cand.J <= reference) {
            result.deformation = std::move(candidate);
            result.kappa = std::move(kappa_cand);
            current = cand;
            accepted = true;
            break;
          }
        } catch (const DegeneracyError&) {
          // treat as a failed step; retry with a smaller alpha
        }
        alpha *= 0.5;
        ++rejects;
      }
      if (!accepted) {
        result.log.stop_reason = "step size below tolerance";
        break;
      }

      ++iter;
      history.push_back(current.J);
      while (static_cast<int>(history.size()) > std::max(1, config.nonmonotone_window))
        history.pop_front();

      IterationRecord rec;
      rec.iter = iter;
      rec.J = current.J;
      rec.W = current.W;
      rec.Estar = current.Estar;
      rec.area = current.area;
      rec.volume = current.volume;
      rec.reduced_volume = current.reduced_volume;
      rec.grad_norm = grad_norm;
      rec.alpha = alpha;
      rec.rejects = rejects;
      result.log.records.push_back(rec);
      if (callback) callback(rec, result.deformation);

      rejects = 0;
      alpha = std::min(config.alpha_max, alpha * std::max(1.0, config.alpha_factor));
    }
    if (iter >= config.max_iterations && result.log.stop_reason.empty())
      result.log.stop_reason = "iteration limit reached";
  }
  result.sigma = solve_adjoint(result.kappa, params);
  return result;
}

}  // namespace memopt
