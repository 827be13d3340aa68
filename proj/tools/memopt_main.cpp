#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "memopt/assembly.hpp"
#include "memopt/curvature.hpp"
#include "memopt/errors.hpp"
#include "memopt/geometry.hpp"
#include "memopt/io.hpp"
#include "memopt/kernels.hpp"
#include "memopt/mesh.hpp"
#include "memopt/optimizer.hpp"
#include "memopt/shape_derivative.hpp"

namespace {

using namespace memopt;

constexpr const char* kSettingKeys[] = {
    "kb", "H0", "cA", "cV", "cAloc", "A0", "V0", "reduced_volume", "normalization",
    "alpha", "alpha_max", "alpha_factor", "Nmax", "grad_tol", "step_tol", "cost_tol", "M",
    "gradient_mode", "metric_eps", "sign_flip", "continuation_rounds", "continuation_factor",
    "shape", "subdivisions", "order", "jitter", "seed", "radius", "axis_c", "axis_a",
    "unit_area", "output_dir", "snapshot_interval"};

struct CommonArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_setting_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file (key = value lines)");
  for (const char* key : kSettingKeys) {
    std::string name = std::string("--") + key;
    cmd->add_option_function<std::string>(
        name, [&args, key](const std::string& v) { args.overrides[key] = v; },
        std::string("override config key ") + key);
  }
  cmd->add_option_function<std::string>(
      "--subdiv", [&args](const std::string& v) { args.overrides["subdivisions"] = v; },
      "alias for --subdivisions");
}

RunSettings resolve_settings(const CommonArgs& args) {
  RunSettings s;
  if (!args.config_path.empty()) s = parse_config(args.config_path);
  for (const auto& [key, value] : args.overrides) apply_override(s, key, value, "<cli>");
  // round-trip through the echo format; re-validates the merged settings
  return parse_config_text(effective_config_text(s), "<effective>");
}

double sphere_kappa_ref(double radius) { return -2.0 / radius; }

int cmd_mesh(const CommonArgs& args, const std::string& out_name) {
  RunSettings s = resolve_settings(args);
  SurfaceMesh mesh = build_shape(s);
  DeformationState zero(mesh);
  MeshMeasures m = measure(mesh, zero);
  std::filesystem::create_directories(s.output_dir);
  std::string path = (std::filesystem::path(s.output_dir) / out_name).string();
  write_obj(path, mesh, nullptr);
  std::printf("mesh: %s vertices=%d triangles=%d edges=%d order=%d\n", s.shape.c_str(),
              mesh.num_vertices(), mesh.num_triangles(), mesh.num_edges(), mesh.geometry_order);
  std::printf("area=%.12g volume=%.12g written=%s\n", m.total_area, m.enclosed_volume,
              path.c_str());
  return 0;
}

int cmd_curvature(const CommonArgs& args) {
  RunSettings s = resolve_settings(args);
  SurfaceMesh mesh = build_shape(s);
  DeformationState zero(mesh);
  ScalarSpace space(mesh, mesh.geometry_order);
  std::vector<double> kappa = solve_state(space, zero);
  PhysicalParams params{s.kb, s.H0};
  BendingEnergy be = bending_energy(space, zero, kappa, params);
  MeshMeasures m = measure(mesh, zero);
  std::printf("shape=%s subdivisions=%d order=%d dofs=%d\n", s.shape.c_str(), s.subdivisions,
              mesh.geometry_order, space.dim());
  std::printf("area=%.12g volume=%.12g\n", m.total_area, m.enclosed_volume);
  std::printf("W=%.12g Estar=%.12g\n", be.W, be.Estar);
  if (parse_shape_kind(s.shape) == ShapeKind::Sphere) {
    double kref = sphere_kappa_ref(s.radius);
    CurvatureErrors errs =
        curvature_errors(space, zero, kappa, [kref](const Vec3&) { return kref; });
    std::printf("L2_error=%.12g Hminus1_error=%.12g (kappa_ref=%.12g)\n", errs.L2, errs.Hminus1,
                kref);
  }
  return 0;
}

int cmd_fdcheck(const CommonArgs& args, std::vector<double> ladder, std::uint64_t probe_seed) {
  RunSettings s = resolve_settings(args);
  SurfaceMesh mesh = build_shape(s);
  DeformationState zero(mesh);
  ScalarSpace space(mesh, mesh.geometry_order);
  VectorSpace vspace(mesh, mesh.geometry_order);
  PhysicalParams params{s.kb, s.H0};
  MeshMeasures m0 = measure(mesh, zero);
  OptimizerConfig cfg = to_optimizer_config(s, m0);

  std::vector<double> kappa = solve_state(space, zero);
  std::vector<double> sigma = solve_adjoint(kappa, params);
  std::vector<double> load =
      shape_derivative_total(vspace, zero, kappa, sigma, params, cfg.constraints);

  std::mt19937_64 rng(probe_seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> probe(vspace.dim());
  for (double& v : probe) v = uni(rng);
  double analytic = kernels::dot(load.data(), probe.data(), load.size());

  auto cost_eval = [&](const DeformationState& d) {
    std::vector<double> k = solve_state(space, d);
    return cost(space, d, k, params, cfg.constraints).J;
  };
  if (ladder.empty()) ladder = {1e-2, 1e-3, 1e-4};
  FdReport report = finite_difference_check(cost_eval, zero, probe, analytic, ladder);
  std::printf("t,fd_value,analytic_value,abs_err,observed_order\n");
  for (const auto& e : report.entries) {
    if (e.skipped) {
      std::printf("%s,skipped,,,\n", format_double(e.t).c_str());
      continue;
    }
    std::printf("%s,%s,%s,%s,\n", format_double(e.t).c_str(), format_double(e.fd_value).c_str(),
                format_double(e.analytic).c_str(), format_double(e.abs_err).c_str());
  }
  std::printf(",,,,%s\n", format_double(report.observed_order).c_str());
  return report.observed_order >= 1.9 ? 0 : 3;
}

int run_optimize(const RunSettings& s, IterationRecord* final_record, double* final_estar) {
  SurfaceMesh mesh = build_shape(s);
  DeformationState zero(mesh);
  MeshMeasures m0 = measure(mesh, zero);
  OptimizerConfig cfg = to_optimizer_config(s, m0);

  std::filesystem::path out_dir(s.output_dir);
  std::filesystem::create_directories(out_dir);
  write_effective_config((out_dir / "effective_config.txt").string(), s);
  CsvLogger logger((out_dir / "run_log.csv").string());

  ScalarSpace space(mesh, mesh.geometry_order);
  auto callback = [&](const IterationRecord& rec, const DeformationState& d) {
    logger.append(rec);
    if (s.snapshot_interval > 0 && rec.iter % s.snapshot_interval == 0) {
      std::vector<double> k = solve_state(space, d);
      std::vector<double> sg = solve_adjoint(k, PhysicalParams{s.kb, s.H0});
      write_vtk((out_dir / ("snapshot_" + std::to_string(rec.iter) + ".vtk")).string(), mesh, d, k,
                sg);
    }
  };
  OptimizeResult result = optimize(mesh, cfg, callback);
  write_obj((out_dir / "final.obj").string(), mesh, &result.deformation);
  write_vtk((out_dir / "final.vtk").string(), mesh, result.deformation, result.kappa,
            result.sigma);
  if (!result.log.records.empty()) {
    const IterationRecord& last = result.log.records.back();
    if (final_record) *final_record = last;
    if (final_estar) *final_estar = last.Estar;
    std::printf("iterations=%zu J=%.12g W=%.12g Estar=%.12g v=%.12g stop=%s\n",
                result.log.records.size(), last.J, last.W, last.Estar, last.reduced_volume,
                result.log.stop_reason.c_str());
  } else {
    std::printf("no accepted iterations (stop=%s)\n", result.log.stop_reason.c_str());
  }
  return 0;
}

int cmd_optimize(const CommonArgs& args) {
  RunSettings s = resolve_settings(args);
  return run_optimize(s, nullptr, nullptr);
}

int cmd_sweep(const CommonArgs& args, std::vector<double> volumes) {
  RunSettings base = resolve_settings(args);
  if (volumes.empty()) volumes = {0.9, 0.8, 0.713};
  std::filesystem::path out_dir(base.output_dir);
  std::filesystem::create_directories(out_dir);
  std::ofstream sweep_csv(out_dir / "sweep.csv");
  sweep_csv << "v,Estar,J,iterations\n";
  for (double v : volumes) {
    RunSettings s = base;
    s.reduced_volume = v;
    s.unit_area = true;  // membranes with area 4*pi
    s.output_dir = (out_dir / ("v_" + std::to_string(v))).string();
    IterationRecord last;
    std::printf("-- reduced volume target %.4f --\n", v);
    run_optimize(s, &last, nullptr);
    sweep_csv << format_double(v) << ',' << format_double(last.Estar) << ','
              << format_double(last.J) << ',' << last.iter << '\n';
  }
  std::printf("sweep results written to %s\n", (out_dir / "sweep.csv").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surface bending-energy curvature and shape optimization tool"};
  app.require_subcommand(1);

  CommonArgs mesh_args, curv_args, fd_args, opt_args, sweep_args;
  std::string mesh_out = "mesh.obj";
  std::vector<double> ladder, volumes;
  std::uint64_t probe_seed = 7002;

  CLI::App* mesh_cmd = app.add_subcommand("mesh", "generate a benchmark mesh and write OBJ");
  add_setting_flags(mesh_cmd, mesh_args);
  mesh_cmd->add_option("--out", mesh_out, "output OBJ file name");

  CLI::App* curv_cmd =
      app.add_subcommand("curvature", "solve the lifted curvature and report energies/errors");
  add_setting_flags(curv_cmd, curv_args);

  CLI::App* fd_cmd = app.add_subcommand("fdcheck", "finite-difference shape-derivative ladder");
  add_setting_flags(fd_cmd, fd_args);
  fd_cmd->add_option("--ladder", ladder, "step sizes (default 1e-2 1e-3 1e-4)");
  fd_cmd->add_option("--probe-seed", probe_seed, "random probe seed");

  CLI::App* opt_cmd = app.add_subcommand("optimize", "run the gradient descent loop");
  add_setting_flags(opt_cmd, opt_args);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "optimize over a list of reduced-volume targets");
  add_setting_flags(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--volumes", volumes, "reduced volume targets (default 0.9 0.8 0.713)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (mesh_cmd->parsed()) return cmd_mesh(mesh_args, mesh_out);
    if (curv_cmd->parsed()) return cmd_curvature(curv_args);
    if (fd_cmd->parsed()) return cmd_fdcheck(fd_args, ladder, probe_seed);
    if (opt_cmd->parsed()) return cmd_optimize(opt_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, volumes);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const DegeneracyError& e) {
    std::fprintf(stderr, "numerical degeneracy: %s\n", e.what());
    return 2;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
