#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "domes/domes.h"

namespace {

domes_curve* square() {
  const double xyz[] = {0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0};
  domes_curve* c = nullptr;
  REQUIRE(domes_curve_create(xyz, nullptr, 4, &c) == DOMES_OK);
  return c;
}

}  // namespace

TEST_CASE("curves and null handling") {
  CHECK(std::string(domes_version()).size() > 0);
  domes_curve* c = square();
  size_t n = 0;
  CHECK(domes_curve_size(c, &n) == DOMES_OK);
  CHECK(n == 4);
  double v[3];
  CHECK(domes_curve_vertex(c, 2, v) == DOMES_OK);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 1.0);
  CHECK(domes_curve_vertex(c, 9, v) == DOMES_E_USAGE);
  CHECK(domes_curve_size(nullptr, &n) == DOMES_E_NULL);
  CHECK(std::string(domes_last_error()).find("NULL") != std::string::npos);
  domes_curve_free(c);
  domes_curve_free(nullptr);

  const double bad[] = {0, 0, 0, 1, 0, 0, 0.5, 0.8, 0};
  const int lengths[] = {1, 1, 1};
  domes_curve* b = nullptr;
  CHECK(domes_curve_create(bad, lengths, 3, &b) == DOMES_E_VALIDATION);
  CHECK(b == nullptr);
  CHECK(domes_curve_create(bad, lengths, 2, &b) == DOMES_E_USAGE);
  CHECK(domes_curve_load("/nonexistent/curve.json", &b) == DOMES_E_IO);
}

TEST_CASE("fan dome, buffers and verification") {
  domes_surface* s = nullptr;
  REQUIRE(domes_fan_dome(std::sqrt(2.0), 2, &s) == DOMES_OK);
  size_t nv = 0, nf = 0;
  CHECK(domes_surface_counts(s, &nv, &nf) == DOMES_OK);
  CHECK(nf == 4);
  std::vector<double> xyz(3 * nv);
  std::vector<int> idx(3 * nf);
  CHECK(domes_surface_vertices(s, xyz.data(), xyz.size() - 1) == DOMES_E_BUFFER);
  CHECK(domes_surface_vertices(s, xyz.data(), xyz.size()) == DOMES_OK);
  CHECK(domes_surface_faces(s, idx.data(), idx.size()) == DOMES_OK);
  for (int i : idx) CHECK(i < static_cast<int>(nv));
  CHECK(domes_fan_dome(2.5, 1, &s) == DOMES_E_USAGE);

  int dim = -1;
  CHECK(domes_flex_dimension(s, &dim, nullptr) == DOMES_OK);
  CHECK(dim == 1);  // open pyramid: the square base hinges
  domes_surface_free(s);

  domes_surface* q5 = nullptr;
  domes_curve* c5 = nullptr;
  REQUIRE(domes_classical_dome(5, &q5) == DOMES_OK);
  REQUIRE(domes_regular_polygon(5, 1, &c5) == DOMES_OK);
  int pass = 0;
  double dev = 1;
  CHECK(domes_verify_dome(q5, c5, 0, &pass, &dev) == DOMES_OK);
  CHECK(pass == 1);
  CHECK(dev < 1e-12);
  CHECK(domes_classical_dome(7, &q5) == DOMES_E_VALIDATION);

  const std::string path = (std::filesystem::temp_directory_path() / "domes_capi_q5.off").string();
  CHECK(domes_surface_export(q5, path.c_str(), "xyz") == DOMES_E_USAGE);
  CHECK(domes_surface_export(q5, path.c_str(), nullptr) == DOMES_OK);
  domes_surface* back = nullptr;
  CHECK(domes_surface_load(path.c_str(), &back) == DOMES_OK);
  CHECK(domes_verify_dome(back, c5, 0, &pass, nullptr) == DOMES_OK);
  CHECK(pass == 1);
  std::remove(path.c_str());
  domes_surface_free(back);
  domes_surface_free(q5);
  domes_curve_free(c5);
}

TEST_CASE("ring dome and curve approximation") {
  domes_surface* s = nullptr;
  double residual = 1;
  REQUIRE(domes_ngon_dome(7, 1, 0.2, &s, &residual) == DOMES_OK);
  CHECK(residual < 1e-8);
  domes_surface_free(s);
  CHECK(domes_ngon_dome(5, 1, 0.2, &s, nullptr) == DOMES_E_VALIDATION);

  domes_curve* c = square();
  domes_surface* dome = nullptr;
  domes_curve* out = nullptr;
  double frechet = 1;
  REQUIRE(domes_dome_curve(c, 1e-2, 3, &dome, &out, &frechet) == DOMES_OK);
  CHECK(frechet < 1e-2);
  int pass = 0;
  CHECK(domes_verify_dome(dome, out, 1e-9, &pass, nullptr) == DOMES_OK);
  CHECK(pass == 1);
  domes_surface_free(dome);
  domes_curve_free(out);
  domes_curve_free(c);
}

TEST_CASE("periodic surfaces") {
  domes_surface* pyr = nullptr;
  REQUIRE(domes_fan_dome(std::sqrt(2.0), 2, &pyr) == DOMES_OK);
  domes_periodic* p = nullptr;
  REQUIRE(domes_periodic_from_dome(pyr, &p) == DOMES_OK);
  double g[3];
  CHECK(domes_periodic_gram(p, g) == DOMES_OK);
  CHECK(std::abs(g[0] - 2) < 1e-12);
  CHECK(std::abs(g[1]) < 1e-12);
  CHECK(std::abs(g[2] - 2) < 1e-12);
  int dim = 0, confirmed = 0;
  CHECK(domes_periodic_flex_dimension(p, &dim, &confirmed) == DOMES_OK);
  CHECK(dim == 1);
  CHECK(confirmed == 1);
  domes_surface* patch = nullptr;
  CHECK(domes_periodic_patch(p, 2, &patch) == DOMES_OK);
  CHECK(domes_periodic_patch(p, 0, &patch) == DOMES_E_VALIDATION);
  domes_surface_free(patch);
  domes_periodic_free(p);
  domes_surface_free(pyr);

  domes_periodic* acc = nullptr;
  REQUIRE(domes_accordion(1.87, 1.96, 2.03, &acc) == DOMES_OK);
  CHECK(domes_periodic_flex_dimension(acc, &dim, nullptr) == DOMES_OK);
  CHECK(dim == 3);
  domes_periodic_free(acc);
  CHECK(domes_accordion(9.0, 1.96, 2.03, &acc) == DOMES_E_VALIDATION);
}

TEST_CASE("cli entry point") {
  const char* argv[] = {"domes", "ngon", "--n", "2"};
  CHECK(domes_cli_main(4, argv) == 2);
}
