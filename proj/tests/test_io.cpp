#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "memopt/errors.hpp"
#include "memopt/geometry.hpp"
#include "memopt/io.hpp"
#include "memopt/mesh.hpp"

using namespace memopt;

namespace {
std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "memopt_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, 1.0 / 3.0, -2.4041295432513217, 1e-300, 4 * 3.141592653589793}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("obj round trip preserves an affine mesh exactly") {
  SurfaceMesh m = generate_icosphere(1, 1.0);
  auto path = temp_dir() / "affine.obj";
  write_obj(path.string(), m);
  SurfaceMesh r = read_obj(path.string());
  REQUIRE(r.num_vertices() == m.num_vertices());
  REQUIRE(r.num_triangles() == m.num_triangles());
  CHECK(r.geometry_order == 1);
  for (int i = 0; i < m.num_vertices(); ++i) CHECK(norm(r.vertices[i] - m.vertices[i]) == 0.0);
  for (int t = 0; t < m.num_triangles(); ++t) CHECK(r.triangles[t] == m.triangles[t]);
}

TEST_CASE("obj round trip preserves curved edge nodes via the sidecar") {
  ShapeParams params;
  params.order = 2;
  SurfaceMesh m = generate_benchmark_shape(ShapeKind::Prolate, 1, params);
  auto path = temp_dir() / "curved.obj";
  write_obj(path.string(), m);
  CHECK(std::filesystem::exists(temp_dir() / "curved.obj.mid"));
  SurfaceMesh r = read_obj(path.string());
  REQUIRE(r.geometry_order == 2);
  REQUIRE(r.num_edges() == m.num_edges());
  for (int e = 0; e < m.num_edges(); ++e)
    CHECK(norm(r.edge_midpoint_nodes[e] - m.edge_midpoint_nodes[e]) == 0.0);
}

TEST_CASE("obj writing applies the deformation") {
  SurfaceMesh m = generate_icosphere(0, 1.0);
  DeformationState def(m);
  for (int n = 0; n < m.num_geometry_nodes(); ++n) def.displacement[3 * n] = 0.5;
  auto path = temp_dir() / "deformed.obj";
  write_obj(path.string(), m, &def);
  SurfaceMesh r = read_obj(path.string());
  for (int i = 0; i < m.num_vertices(); ++i)
    CHECK(r.vertices[i].x == doctest::Approx(m.vertices[i].x + 0.5).epsilon(1e-15));
}

TEST_CASE("vtk export counts points and cells") {
  SurfaceMesh m = generate_icosphere(1, 1.0);  // 42 vertices, 80 triangles
  DeformationState zero(m);
  std::vector<double> kappa(42, -2.0), sigma(42, 0.04);
  auto path = temp_dir() / "mesh.vtk";
  write_vtk(path.string(), m, zero, kappa, sigma);
  std::string text = slurp(path);
  CHECK(text.find("POINTS 42 double") != std::string::npos);
  CHECK(text.find("CELLS 80 320") != std::string::npos);
  CHECK(text.find("SCALARS kappa double") != std::string::npos);
  CHECK(text.find("SCALARS mean_curvature double") != std::string::npos);
  CHECK(text.find("VECTORS displacement double") != std::string::npos);
}

TEST_CASE("csv logger writes the fixed header and one line per record") {
  auto path = temp_dir() / "log.csv";
  {
    CsvLogger logger(path.string());
    IterationRecord rec;
    rec.iter = 1;
    rec.J = 0.5;
    logger.append(rec);
  }
  std::string text = slurp(path);
  CHECK(text.rfind("iter,J,W,Estar,A,V,v,gradnorm,alpha,rejects\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("config defaults survive an effective-config round trip") {
  RunSettings defaults;
  RunSettings reparsed = parse_config_text(effective_config_text(defaults), "test");
  CHECK(effective_config_text(reparsed) == effective_config_text(defaults));
  CHECK(reparsed.kb == 0.01);
  CHECK(reparsed.cA == 2.0);
  CHECK(reparsed.cV == 1.0);
  CHECK(reparsed.alpha == 0.025);
  CHECK(reparsed.alpha_max == 0.1);
  CHECK(reparsed.Nmax == 100);
  CHECK(reparsed.step_tol == 1e-11);
  CHECK(reparsed.normalization == "supplementary");
}

TEST_CASE("config parsing reports unknown keys with line numbers") {
  try {
    parse_config_text("[physics]\nkb = 0.01\nnot_a_key = 3\n", "inline");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("not_a_key") != std::string::npos);
    CHECK(msg.find("3") != std::string::npos);  // line number
  }
}

TEST_CASE("config parsing rejects bad values and sections") {
  CHECK_THROWS_AS(parse_config_text("kb = banana\n", "inline"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[nonsense]\n", "inline"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("subdivisions = -1\n", "inline"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("order = 5\n", "inline"), ConfigError);
}

TEST_CASE("comments and sections parse") {
  RunSettings s = parse_config_text(
      "# a comment\n[physics]\nkb = 0.5\n[geometry]\nshape = oblate\nsubdivisions = 2\n", "inline");
  CHECK(s.kb == 0.5);
  CHECK(s.shape == "oblate");
  CHECK(s.subdivisions == 2);
}

TEST_CASE("apply_override handles every value type") {
  RunSettings s;
  apply_override(s, "kb", "0.125", "t");
  apply_override(s, "Nmax", "7", "t");
  apply_override(s, "sign_flip", "true", "t");
  apply_override(s, "shape", "biconcave", "t");
  apply_override(s, "seed", "123", "t");
  CHECK(s.kb == 0.125);
  CHECK(s.Nmax == 7);
  CHECK(s.sign_flip);
  CHECK(s.shape == "biconcave");
  CHECK(s.seed == 123);
  CHECK_THROWS_AS(apply_override(s, "bogus", "1", "t"), ConfigError);
}

TEST_CASE("unit_area rescales the start shape to area 4 pi") {
  RunSettings s;
  s.shape = "prolate";
  s.subdivisions = 2;
  s.unit_area = true;
  SurfaceMesh m = build_shape(s);
  DeformationState zero(m);
  MeshMeasures meas = measure(m, zero);
  CHECK(meas.total_area == doctest::Approx(4.0 * 3.14159265358979).epsilon(1e-10));
}

TEST_CASE("shape generation is deterministic") {
  RunSettings s;
  s.shape = "sphere";
  s.jitter = 0.2;
  s.subdivisions = 2;
  SurfaceMesh a = build_shape(s), b = build_shape(s);
  for (int i = 0; i < a.num_vertices(); ++i) CHECK(norm(a.vertices[i] - b.vertices[i]) == 0.0);
}
