#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memopt/mesh.hpp"
#include "memopt/optimizer.hpp"

namespace memopt {

/// Shortest round-trippable decimal formatting (17 significant digits) so
/// repeated runs produce bit-identical files.
std::string format_double(double v);

/// ASCII OBJ (v/f records). Deformed coordinates when a deformation is given;
/// order 2 meshes additionally write `<path>.mid` with `edge_index x y z`
/// lines for the curved edge nodes.
void write_obj(const std::string& path, const SurfaceMesh& mesh,
               const DeformationState* deformation = nullptr);
SurfaceMesh read_obj(const std::string& path);

/// Legacy ASCII VTK unstructured grid with point data kappa, sigma,
/// mean_curvature (= |kappa|/2) and displacement. Field vectors may exceed the
/// vertex count (higher-order dofs); only vertex values are exported.
void write_vtk(const std::string& path, const SurfaceMesh& mesh,
               const DeformationState& deformation, const std::vector<double>& kappa,
               const std::vector<double>& sigma);

/// Append-style CSV run log with the fixed header
/// iter,J,W,Estar,A,V,v,gradnorm,alpha,rejects.
class CsvLogger {
 public:
  explicit CsvLogger(const std::string& path);
  void append(const IterationRecord& record);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Flat run description as read from a config file; geometry and output
/// settings live beside the optimizer parameters.
struct RunSettings {
  // physics
  double kb = 0.01;
  double H0 = 0.0;
  // constraints; weights multiply residuals normalized by A0 / V0 / |T0|
  double cA = 2.0, cV = 1.0, cAloc = 1.0;
  double A0 = 0.0, V0 = 0.0;    // 0 = measure from the initial shape
  double reduced_volume = 0.0;  // > 0 derives V0 from A0
  std::string normalization = "supplementary";
  // algorithm
  double alpha = 0.025, alpha_max = 0.1, alpha_factor = 1.0;
  int Nmax = 100;
  double grad_tol = 1e-12, step_tol = 1e-11, cost_tol = 1e-10;
  int M = 0;  // non-monotone window; 0 = monotone
  std::string gradient_mode = "h1";
  double metric_eps = 1e-10;
  bool sign_flip = false;
  int continuation_rounds = 1;
  double continuation_factor = 1.0;
  // geometry
  std::string shape = "prolate";
  int subdivisions = 3;
  int order = 1;
  double jitter = 0.0;
  std::uint64_t seed = 20240317;
  double radius = 1.0;
  double axis_c = 1.1017, axis_a = 0.95;
  bool unit_area = false;  // rescale the start shape to area 4*pi
  // output
  std::string output_dir = ".";
  int snapshot_interval = 0;
};

/// `key = value` file with optional [section] headers and # comments.
/// Unknown keys, bad values, and invariant violations raise ConfigError with
/// the offending line number.
RunSettings parse_config(const std::string& path);
RunSettings parse_config_text(const std::string& text, const std::string& origin);

/// Applies a single `key=value` override (CLI flags reuse the config keys).
void apply_override(RunSettings& settings, const std::string& key, const std::string& value,
                    const std::string& origin);

/// Serializes every setting; the result re-parses to an equal RunSettings.
std::string effective_config_text(const RunSettings& settings);
void write_effective_config(const std::string& path, const RunSettings& settings);

/// Builds the configured benchmark start shape.
SurfaceMesh build_shape(const RunSettings& settings);

/// Translates the file-level settings into an OptimizerConfig (A0/V0 targets
/// resolved against the given start measures).
OptimizerConfig to_optimizer_config(const RunSettings& settings, const MeshMeasures& start);

}  // namespace memopt
