#include "memopt/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "memopt/errors.hpp"
#include "memopt/geometry.hpp"

namespace memopt {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

Vec3 deformed_node(const SurfaceMesh& mesh, const DeformationState* deformation, int node) {
  Vec3 p = mesh.geometry_node(node);
  if (deformation) p += deformation->node_displacement(node);
  return p;
}

}  // namespace

void write_obj(const std::string& path, const SurfaceMesh& mesh,
               const DeformationState* deformation) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    Vec3 p = deformed_node(mesh, deformation, i);
    out << "v " << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z)
        << '\n';
  }
  for (const auto& t : mesh.triangles)
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
  if (mesh.geometry_order == 2) {
    std::ofstream mid = open_out(path + ".mid");
    for (int e = 0; e < mesh.num_edges(); ++e) {
      Vec3 p = deformed_node(mesh, deformation, mesh.num_vertices() + e);
      mid << e << ' ' << format_double(p.x) << ' ' << format_double(p.y) << ' '
          << format_double(p.z) << '\n';
    }
    if (!mid) throw IoError("write failed for '" + path + ".mid'");
  }
}

SurfaceMesh read_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  SurfaceMesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z))
        throw IoError(path + ":" + std::to_string(lineno) + ": malformed vertex");
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      std::array<int, 3> tri;
      std::string tok;
      for (int i = 0; i < 3; ++i) {
        if (!(ls >> tok)) throw IoError(path + ":" + std::to_string(lineno) + ": malformed face");
        tri[i] = std::stoi(tok.substr(0, tok.find('/'))) - 1;  // 1-based, ignore vt/vn refs
        if (tri[i] < 0) throw IoError(path + ":" + std::to_string(lineno) + ": bad vertex index");
      }
      if (ls >> tok) throw IoError(path + ":" + std::to_string(lineno) + ": only triangles supported");
      mesh.triangles.push_back(tri);
    }
    // other records are ignored
  }
  finalize_connectivity(mesh);

  std::ifstream mid(path + ".mid");
  if (mid) {
    mesh.geometry_order = 2;
    mesh.edge_midpoint_nodes.assign(mesh.num_edges(), Vec3{});
    std::vector<bool> seen(mesh.num_edges(), false);
    int e;
    Vec3 p;
    while (mid >> e >> p.x >> p.y >> p.z) {
      if (e < 0 || e >= mesh.num_edges())
        throw IoError(path + ".mid: edge index " + std::to_string(e) + " out of range");
      mesh.edge_midpoint_nodes[e] = p;
      seen[e] = true;
    }
    for (int i = 0; i < mesh.num_edges(); ++i)
      if (!seen[i]) throw IoError(path + ".mid: missing node for edge " + std::to_string(i));
  }
  return mesh;
}

void write_vtk(const std::string& path, const SurfaceMesh& mesh,
               const DeformationState& deformation, const std::vector<double>& kappa,
               const std::vector<double>& sigma) {
  int nv = mesh.num_vertices();
  if (static_cast<int>(kappa.size()) < nv || static_cast<int>(sigma.size()) < nv)
    throw IoError("write_vtk: field shorter than vertex count");
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 2.0\nmembrane surface\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (int i = 0; i < nv; ++i) {
    Vec3 p = deformed_node(mesh, &deformation, i);
    out << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z) << '\n';
  }
  out << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_triangles() << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) out << "5\n";
  out << "POINT_DATA " << nv << '\n';
  auto scalars = [&](const char* name, auto value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < nv; ++i) out << format_double(value(i)) << '\n';
  };
  scalars("kappa", [&](int i) { return kappa[i]; });
  scalars("sigma", [&](int i) { return sigma[i]; });
  scalars("mean_curvature", [&](int i) { return 0.5 * std::abs(kappa[i]); });
  out << "VECTORS displacement double\n";
  for (int i = 0; i < nv; ++i) {
    Vec3 d = deformation.node_displacement(i);
    out << format_double(d.x) << ' ' << format_double(d.y) << ' ' << format_double(d.z) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

CsvLogger::CsvLogger(const std::string& path) : path_(path) {
  std::ofstream out = open_out(path);
  out << "iter,J,W,Estar,A,V,v,gradnorm,alpha,rejects\n";
}

void CsvLogger::append(const IterationRecord& r) {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to '" + path_ + "'");
  out << r.iter << ',' << format_double(r.J) << ',' << format_double(r.W) << ','
      << format_double(r.Estar) << ',' << format_double(r.area) << ',' << format_double(r.volume)
      << ',' << format_double(r.reduced_volume) << ',' << format_double(r.grad_norm) << ','
      << format_double(r.alpha) << ',' << r.rejects << '\n';
}

namespace {

template <typename T>
T parse_value(const std::string& value, const std::string& where);

template <>
double parse_value<double>(const std::string& value, const std::string& where) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(where + ": cannot parse '" + value + "' as number");
  }
  if (pos != value.size()) throw ConfigError(where + ": trailing characters in '" + value + "'");
  return v;
}

template <>
int parse_value<int>(const std::string& value, const std::string& where) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(where + ": cannot parse '" + value + "' as integer");
  }
  if (pos != value.size()) throw ConfigError(where + ": trailing characters in '" + value + "'");
  return v;
}

template <>
std::uint64_t parse_value<std::uint64_t>(const std::string& value, const std::string& where) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(where + ": cannot parse '" + value + "' as unsigned integer");
  }
  if (pos != value.size()) throw ConfigError(where + ": trailing characters in '" + value + "'");
  return v;
}

template <>
bool parse_value<bool>(const std::string& value, const std::string& where) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(where + ": expected true/false, got '" + value + "'");
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void validate(const RunSettings& s, const std::string& where) {
  auto fail = [&](const std::string& msg) { throw ConfigError(where + ": " + msg); };
  if (!(s.kb > 0.0)) fail("kb must be positive");
  if (s.cA < 0.0 || s.cV < 0.0 || s.cAloc < 0.0) fail("penalty weights must be >= 0");
  if (!(s.alpha > 0.0)) fail("alpha must be positive");
  if (s.alpha > s.alpha_max) fail("alpha must not exceed alpha_max");
  if (s.alpha_factor < 1.0) fail("alpha_factor must be >= 1");
  if (s.Nmax < 0) fail("Nmax must be >= 0");
  if (s.M < 0) fail("M must be >= 0");
  if (s.normalization != "supplementary" && s.normalization != "paper")
    fail("normalization must be 'supplementary' or 'paper'");
  if (s.gradient_mode != "h1" && s.gradient_mode != "stokes")
    fail("gradient_mode must be 'h1' or 'stokes'");
  if (s.order != 1 && s.order != 2) fail("order must be 1 or 2");
  if (s.subdivisions < 0 || s.subdivisions > 8) fail("subdivisions must be in [0, 8]");
  if (s.jitter < 0.0) fail("jitter must be >= 0");
  if (!(s.metric_eps > 0.0)) fail("metric_eps must be positive");
  if (s.reduced_volume < 0.0 || s.reduced_volume > 1.0)
    fail("reduced_volume must be in (0, 1]");
  if (s.continuation_rounds < 1) fail("continuation_rounds must be >= 1");
  if (!(s.continuation_factor > 0.0)) fail("continuation_factor must be positive");
  if (s.snapshot_interval < 0) fail("snapshot_interval must be >= 0");
  parse_shape_kind(s.shape);  // throws on unknown
}

}  // namespace

void apply_override(RunSettings& s, const std::string& key, const std::string& value,
                    const std::string& where) {
  if (key == "kb") s.kb = parse_value<double>(value, where);
  else if (key == "H0") s.H0 = parse_value<double>(value, where);
  else if (key == "cA") s.cA = parse_value<double>(value, where);
  else if (key == "cV") s.cV = parse_value<double>(value, where);
  else if (key == "cAloc") s.cAloc = parse_value<double>(value, where);
  else if (key == "A0") s.A0 = parse_value<double>(value, where);
  else if (key == "V0") s.V0 = parse_value<double>(value, where);
  else if (key == "reduced_volume") s.reduced_volume = parse_value<double>(value, where);
  else if (key == "normalization") s.normalization = value;
  else if (key == "alpha") s.alpha = parse_value<double>(value, where);
  else if (key == "alpha_max") s.alpha_max = parse_value<double>(value, where);
  else if (key == "alpha_factor") s.alpha_factor = parse_value<double>(value, where);
  else if (key == "Nmax") s.Nmax = parse_value<int>(value, where);
  else if (key == "grad_tol") s.grad_tol = parse_value<double>(value, where);
  else if (key == "step_tol") s.step_tol = parse_value<double>(value, where);
  else if (key == "cost_tol") s.cost_tol = parse_value<double>(value, where);
  else if (key == "M") s.M = parse_value<int>(value, where);
  else if (key == "gradient_mode") s.gradient_mode = value;
  else if (key == "metric_eps") s.metric_eps = parse_value<double>(value, where);
  else if (key == "sign_flip") s.sign_flip = parse_value<bool>(value, where);
  else if (key == "continuation_rounds") s.continuation_rounds = parse_value<int>(value, where);
  else if (key == "continuation_factor") s.continuation_factor = parse_value<double>(value, where);
  else if (key == "shape") s.shape = value;
  else if (key == "subdivisions") s.subdivisions = parse_value<int>(value, where);
  else if (key == "order") s.order = parse_value<int>(value, where);
  else if (key == "jitter") s.jitter = parse_value<double>(value, where);
  else if (key == "seed") s.seed = parse_value<std::uint64_t>(value, where);
  else if (key == "radius") s.radius = parse_value<double>(value, where);
  else if (key == "axis_c") s.axis_c = parse_value<double>(value, where);
  else if (key == "axis_a") s.axis_a = parse_value<double>(value, where);
  else if (key == "unit_area") s.unit_area = parse_value<bool>(value, where);
  else if (key == "output_dir") s.output_dir = value;
  else if (key == "snapshot_interval") s.snapshot_interval = parse_value<int>(value, where);
  else throw ConfigError(where + ": unknown key '" + key + "'");
}

RunSettings parse_config_text(const std::string& text, const std::string& origin) {
  static const std::map<std::string, int> kSections = {
      {"physics", 0}, {"constraints", 0}, {"algorithm", 0}, {"geometry", 0}, {"output", 0}};
  RunSettings s;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = origin + ":" + std::to_string(lineno);
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      std::string section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section)) throw ConfigError(where + ": unknown section '" + section + "'");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(where + ": expected 'key = value'");
    apply_override(s, key, value, where);
  }
  validate(s, origin);
  return s;
}

RunSettings parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string effective_config_text(const RunSettings& s) {
  std::ostringstream out;
  out << "[physics]\n";
  out << "kb = " << format_double(s.kb) << "\n";
  out << "H0 = " << format_double(s.H0) << "\n";
  out << "[constraints]\n";
  out << "cA = " << format_double(s.cA) << "\n";
  out << "cV = " << format_double(s.cV) << "\n";
  out << "cAloc = " << format_double(s.cAloc) << "\n";
  out << "A0 = " << format_double(s.A0) << "\n";
  out << "V0 = " << format_double(s.V0) << "\n";
  out << "reduced_volume = " << format_double(s.reduced_volume) << "\n";
  out << "normalization = " << s.normalization << "\n";
  out << "[algorithm]\n";
  out << "alpha = " << format_double(s.alpha) << "\n";
  out << "alpha_max = " << format_double(s.alpha_max) << "\n";
  out << "alpha_factor = " << format_double(s.alpha_factor) << "\n";
  out << "Nmax = " << s.Nmax << "\n";
  out << "grad_tol = " << format_double(s.grad_tol) << "\n";
  out << "step_tol = " << format_double(s.step_tol) << "\n";
  out << "cost_tol = " << format_double(s.cost_tol) << "\n";
  out << "M = " << s.M << "\n";
  out << "gradient_mode = " << s.gradient_mode << "\n";
  out << "metric_eps = " << format_double(s.metric_eps) << "\n";
  out << "sign_flip = " << (s.sign_flip ? "true" : "false") << "\n";
  out << "continuation_rounds = " << s.continuation_rounds << "\n";
  out << "continuation_factor = " << format_double(s.continuation_factor) << "\n";
  out << "[geometry]\n";
  out << "shape = " << s.shape << "\n";
  out << "subdivisions = " << s.subdivisions << "\n";
  out << "order = " << s.order << "\n";
  out << "jitter = " << format_double(s.jitter) << "\n";
  out << "seed = " << s.seed << "\n";
  out << "radius = " << format_double(s.radius) << "\n";
  out << "axis_c = " << format_double(s.axis_c) << "\n";
  out << "axis_a = " << format_double(s.axis_a) << "\n";
  out << "unit_area = " << (s.unit_area ? "true" : "false") << "\n";
  out << "[output]\n";
  out << "output_dir = " << s.output_dir << "\n";
  out << "snapshot_interval = " << s.snapshot_interval << "\n";
  return out.str();
}

void write_effective_config(const std::string& path, const RunSettings& s) {
  std::ofstream out = open_out(path);
  out << effective_config_text(s);
  if (!out) throw IoError("write failed for '" + path + "'");
}

SurfaceMesh build_shape(const RunSettings& s) {
  ShapeKind kind = parse_shape_kind(s.shape);
  ShapeParams params;
  params.radius = s.radius;
  params.c = s.axis_c;
  params.a = s.axis_a;
  params.jitter = s.jitter;
  params.seed = s.seed;
  params.order = s.order;
  if (s.unit_area) {
    if (kind == ShapeKind::Biconcave)
      throw ConfigError("unit_area rescaling is not supported for the biconcave shape");
    // Rescale the analytic shape so the start mesh has area close to 4*pi.
    SurfaceMesh probe = generate_benchmark_shape(kind, s.subdivisions, params);
    DeformationState zero(probe);
    double area = measure(probe, zero).total_area;
    double scale = std::sqrt(4.0 * M_PI / area);
    params.radius *= scale;
    params.c *= scale;
    params.a *= scale;
  }
  return generate_benchmark_shape(kind, s.subdivisions, params);
}

OptimizerConfig to_optimizer_config(const RunSettings& s, const MeshMeasures& start) {
  OptimizerConfig cfg;
  cfg.params.kb = s.kb;
  cfg.params.H0 = s.H0;
  cfg.constraints.cA = s.cA;
  cfg.constraints.cV = s.cV;
  cfg.constraints.cAloc = s.cAloc;
  cfg.constraints.A0 = s.A0 > 0.0 ? s.A0 : start.total_area;
  if (s.V0 > 0.0) {
    cfg.constraints.V0 = s.V0;
  } else if (s.reduced_volume > 0.0) {
    cfg.constraints.V0 = s.reduced_volume * (4.0 * M_PI / 3.0) *
                         std::pow(cfg.constraints.A0 / (4.0 * M_PI), 1.5);
  } else {
    cfg.constraints.V0 = start.enclosed_volume;
  }
  cfg.constraints.T0 = start.element_areas;
  cfg.constraints.mode = s.normalization == "paper" ? NormalizationMode::Paper
                                                    : NormalizationMode::Supplementary;
  cfg.alpha_init = s.alpha;
  cfg.alpha_max = s.alpha_max;
  cfg.alpha_factor = s.alpha_factor;
  cfg.max_iterations = s.Nmax;
  cfg.grad_tol = s.grad_tol;
  cfg.step_tol = s.step_tol;
  cfg.cost_tol = s.cost_tol;
  cfg.nonmonotone_window = s.M;
  cfg.gradient_mode = s.gradient_mode == "stokes" ? GradientMode::Stokes : GradientMode::H1;
  cfg.metric_epsilon = s.metric_eps;
  cfg.spontaneous_sign_flip = s.sign_flip;
  cfg.continuation_rounds = s.continuation_rounds;
  cfg.continuation_factor = s.continuation_factor;
  return cfg;
}

}  // namespace memopt
