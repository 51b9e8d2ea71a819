#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "domes/cli.hpp"
#include "domes/io.hpp"
#include "domes/regular.hpp"
#include "support.hpp"

using namespace domes;
using namespace fixtures;
namespace fs = std::filesystem;

namespace {

const std::string kData = DOMES_TEST_DATA;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("domes_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "domes");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  return code;
}

Json report_of(const std::string& path) { return Json::parse(read_text(path)); }

}  // namespace

TEST_CASE("curve files") {
  const IntegralCurve sq = parse_curve(kData + "/unit_square.json");
  CHECK(sq.size() == 4);
  CHECK(sq.lengths == std::vector<int>(4, 1));

  try {
    parse_curve(kData + "/two_points.json");
    FAIL("expected a malformed error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Malformed);
  }

  TempDir tmp;
  const IntegralCurve c = folded_curve(6, 3);
  write_curve(c, tmp / "c.json");
  const IntegralCurve back = parse_curve(tmp / "c.json");
  CHECK(back.vertices == c.vertices);
  CHECK(back.lengths == c.lengths);

  // Lengths inferred by rounding, then validated.
  IntegralCurve tri;
  tri.vertices = {{0, 0, 0}, {2, 0, 0}, {1, std::sqrt(3.0), 0}};
  Json j = curve_to_json(tri);
  j.erase("lengths");
  CHECK(curve_from_json(j).lengths == std::vector<int>{2, 2, 2});

  write_text(tmp / "bad.json", "{\"vertices\": [[0,0,0],[1,0,0],[0.5,0.8,0]]}");
  CHECK_THROWS_AS(parse_curve(tmp / "bad.json"), Error);
  write_text(tmp / "broken.json", "{\"vertices\": [[0,0,0],\n[1,0");
  CHECK_THROWS_AS(parse_curve(tmp / "broken.json"), Error);
  CHECK_THROWS_AS(curve_from_json(Json{{"vertices", {{0, 0}, {1, 0}, {0, 1}}}}), Error);
}

TEST_CASE("mesh formats") {
  const TriSurface pyr = square_pyramid();
  const std::string obj = mesh_to_string(pyr, MeshFormat::Obj);
  int v = 0, f = 0;
  std::istringstream in(obj);
  for (std::string line; std::getline(in, line);) {
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
  }
  CHECK(v == 5);
  CHECK(f == 4);

  for (MeshFormat fmt : {MeshFormat::Obj, MeshFormat::Off}) {
    const TriSurface once = mesh_from_string(mesh_to_string(pyr, fmt), fmt);
    CHECK(once.faces == pyr.faces);
    CHECK(once.vertices == pyr.vertices);
    const TriSurface twice = mesh_from_string(mesh_to_string(once, fmt), fmt);
    CHECK(twice.faces == once.faces);
    CHECK(twice.vertices == once.vertices);
  }

  CHECK(parse_mesh_format("OBJ") == MeshFormat::Obj);
  CHECK(parse_mesh_format("off") == MeshFormat::Off);
  try {
    parse_mesh_format("stl");
    FAIL("expected a usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Usage);
  }

  TempDir tmp;
  TriSurface loose = pyr;
  loose.unit_flag = false;
  export_mesh(loose, tmp / "p.off");
  const TriSurface back = import_mesh(tmp / "p.off");
  CHECK(back.faces == pyr.faces);
  CHECK_THROWS_AS(import_mesh(tmp / "missing.obj"), Error);
}

TEST_CASE("json records") {
  FlipPlan plan{{{2, 3}, {4, -1}}};
  CHECK(flip_plan_from_json(to_json(plan)).steps == plan.steps);
  const PeriodicSurface p = periodic_from_dome(square_pyramid());
  const PeriodicSurface q = periodic_from_json(to_json(p));
  CHECK(q.orbit_vertices == p.orbit_vertices);
  CHECK(q.faces == p.faces);
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("cli: verify, usage and io errors") {
  TempDir tmp;
  export_mesh(classical_dome(5), tmp / "q5.obj");
  CHECK(cli({"verify", tmp / "q5.obj", kData + "/pentagon.json", "--report", tmp / "r.json"}) == 0);
  const Json r = report_of(tmp / "r.json");
  CHECK(r["schema_version"] == kSchemaVersion);
  CHECK(r["exit_code"] == 0);
  CHECK(r["results"]["verdict"]["pass"] == true);

  CHECK(cli({"verify", tmp / "q5.obj", kData + "/unit_square.json", "--report", tmp / "r.json"}) == 3);
  CHECK(cli({"verify", tmp / "q5.obj", kData + "/two_points.json", "--report", tmp / "r.json"}) == 3);
  CHECK(report_of(tmp / "r.json")["error"]["kind"] == "malformed");
  CHECK(cli({"verify", tmp / "nope.obj", kData + "/pentagon.json", "--report", tmp / "r.json"}) == 5);
  CHECK(cli({"ngon", "--n", "2"}) == 2);
  CHECK(cli({"classical", "--n", "7"}) == 2);
  CHECK(cli({"classical", "--n", "4", "--out", tmp / "x.stl"}) == 2);
  CHECK(cli({"frobnicate"}) == 2);
}

TEST_CASE("cli: constructions write artifacts that re-load") {
  TempDir tmp;
  std::string out;
  CHECK(cli({"classical", "--n", "8", "--out", tmp / "q8.obj", "--report", tmp / "r.json"}) == 0);
  CHECK(verify_dome(import_mesh(tmp / "q8.obj"), regular_polygon(8)).pass);
  const Json r = report_of(tmp / "r.json");
  REQUIRE(r["outputs"].size() == 1);
  CHECK(r["outputs"][0]["fnv1a"] == hex64(fnv1a(read_text(tmp / "q8.obj"))));

  CHECK(cli({"ngon", "--n", "9", "--out", tmp / "q9.off", "--report", tmp / "r.json"}) == 0);
  CHECK(verify_dome(import_mesh(tmp / "q9.off"), regular_polygon(9)).pass);
  CHECK(report_of(tmp / "r.json")["results"]["plan"]["closure_residual"] < 1e-8);

  CHECK(cli({"rhombus", "--a", "1.4142135623730951", "--m", "2", "--out", tmp / "f.obj"}, &out) == 0);
  CHECK(import_mesh(tmp / "f.obj").faces.size() == 4);
  CHECK(Json::parse(out)["exit_code"] == 0);

  export_mesh(square_pyramid(), tmp / "pyr.obj");
  CHECK(cli({"periodic", tmp / "pyr.obj", "--report", tmp / "p.json", "--out", tmp / "p_surface.json"}) == 0);
  CHECK(report_of(tmp / "p.json")["results"]["gram"]["g11"] == doctest::Approx(2.0));
  const PeriodicSurface ps = periodic_from_json(Json::parse(read_text(tmp / "p_surface.json")));
  CHECK(ps.orbit_vertices.size() == 4);
  CHECK(cli({"periodic", "--report", tmp / "p.json"}) == 2);
  CHECK(cli({"flex", "--accordion", "--report", tmp / "fl.json"}) == 0);
  CHECK(report_of(tmp / "fl.json")["results"]["flex"]["infinitesimal_dim"] == 3);
}

TEST_CASE("cli: approx on a heptagon is reproducible") {
  TempDir tmp;
  const std::vector<std::string> args{"approx", kData + "/heptagon.json", "--eps", "1e-2", "--seed", "7"};
  auto a = args;
  a.insert(a.end(), {"--out", tmp / "d.obj", "--report", tmp / "r.json"});
  REQUIRE(cli(a) == 0);
  const std::string first = read_text(tmp / "r.json"), first_mesh = read_text(tmp / "d.obj");
  REQUIRE(cli(a) == 0);
  CHECK(read_text(tmp / "r.json") == first);
  CHECK(read_text(tmp / "d.obj") == first_mesh);
  const Json r = Json::parse(first);
  CHECK(r["results"]["frechet"] < 1e-2);
  CHECK(r["results"]["verdict"]["pass"] == true);
}
