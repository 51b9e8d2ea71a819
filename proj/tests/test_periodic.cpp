#include <doctest.h>

#include "domes/periodic.hpp"
#include "domes/rhombus.hpp"
#include "support.hpp"

using namespace domes;
using namespace fixtures;

namespace {

// Fan over the axis (-a/2,0,0)-(a/2,0,0) starting below it.
TriSurface fan(double a, int m) {
  const Point3 v(-a / 2, 0, 0), w(a / 2, 0, 0), start(0, -std::sqrt(1 - a * a / 4), 0);
  return fan_dome(v, w, start, m);
}

TriSurface two_triangles(double a) {
  const auto v = RhombusSpec{a, 1.0}.vertices();
  TriSurface s;
  for (const Point3& p : v) s.add_vertex(p);
  s.add_face(0, 1, 3);
  s.add_face(1, 2, 3);
  return s;
}

// Edge-length Jacobian of a closed framework, rank by QR, minus rigid motions.
int oracle_flex_dim(const TriSurface& s) {
  const auto edges = edges_of(s);
  const int n = static_cast<int>(s.vertices.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(edges.size()), 3 * n);
  for (std::size_t r = 0; r < edges.size(); ++r) {
    const auto [a, b] = edges[r];
    const Point3 d = s.vertices[a] - s.vertices[b];
    for (int k = 0; k < 3; ++k) {
      j(static_cast<Eigen::Index>(r), 3 * a + k) = d[k];
      j(static_cast<Eigen::Index>(r), 3 * b + k) = -d[k];
    }
  }
  return 3 * n - qr_rank(j, 1e-9) - 6;
}

double edge_spread(const TriSurface& a, const TriSurface& b) {
  double worst = 0;
  for (auto [i, k] : edges_of(a))
    worst = std::max(worst, std::abs((a.vertices[i] - a.vertices[k]).norm() - (b.vertices[i] - b.vertices[k]).norm()));
  return worst;
}

double alignment_residual(const TriSurface& a, const TriSurface& b) {
  const RigidMotion m = best_fit_motion(a.vertices, b.vertices);
  double worst = 0;
  for (std::size_t i = 0; i < a.vertices.size(); ++i)
    worst = std::max(worst, (m.apply(a.vertices[i]) - b.vertices[i]).norm());
  return worst;
}

}  // namespace

TEST_CASE("square pyramid gives the square lattice") {
  const PeriodicSurface p = periodic_from_dome(square_pyramid());
  const GramMatrix g = gram_of(p);
  CHECK(g.g11 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(g.g12) < 1e-12);
  CHECK(g.g22 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(g.degenerate());
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("two triangles over a rhombus") {
  const PeriodicSurface p = periodic_from_dome(two_triangles(1.3));
  const GramMatrix g = gram_of(p);
  CHECK(g.g11 == doctest::Approx(1.69).epsilon(1e-12));
  CHECK(std::abs(g.g12) < 1e-12);
  CHECK(g.g22 == doctest::Approx(1.0).epsilon(1e-12));
  const TriSurface patch = materialize_patch(p, 3);
  CHECK(max_unit_edge_deviation(patch) < 1e-10);
}

TEST_CASE("periodic_from_dome preconditions") {
  const IntegralCurve q5 = planar_regular(5);
  TriSurface pyr;
  for (const Point3& v : q5.vertices) pyr.add_vertex(v);
  pyr.add_vertex({0, 0, std::sqrt(1 - q5[0].squaredNorm())});
  for (int i = 0; i < 5; ++i) pyr.add_face(i, (i + 1) % 5, 5);
  CHECK_THROWS_AS(periodic_from_dome(pyr), Error);
  CHECK_THROWS_AS(periodic_from_dome(octahedron()), Error);
}

TEST_CASE("degenerate lattice") {
  PeriodicSurface p = periodic_from_dome(square_pyramid());
  p.beta = p.alpha;
  CHECK(gram_of(p).degenerate());
  CHECK(gram_of(p).determinant() == doctest::Approx(0.0));
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("property: fan domes give orthogonal lattices with the diagonal lengths") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> ua(0.1, 1.7);
  int used = 0;
  while (used < 100) {
    const double a = ua(rng);
    const int m = 1 + static_cast<int>(rng() % 50);
    const double c = chord_length(a, m);
    if (c < 1e-3) continue;
    ++used;
    const PeriodicSurface p = periodic_from_dome(fan(a, m));
    const GramMatrix g = gram_of(p);
    const double lo = std::min(g.g11, g.g22), hi = std::max(g.g11, g.g22);
    CHECK(std::abs(lo - std::min(a * a, c * c)) < 1e-9);
    CHECK(std::abs(hi - std::max(a * a, c * c)) < 1e-9);
    CHECK(std::abs(g.g12) < 1e-9);

    // Every realized edge in a 3x3 patch is unit.
    const TriSurface patch = materialize_patch(p, 3);
    CHECK(max_unit_edge_deviation(patch) < 1e-10);

    // Shifting the orbit representatives by a lattice vector shifts the patch.
    PeriodicSurface shifted = p;
    const Point3 t = 2.0 * p.alpha - p.beta;
    for (Point3& v : shifted.orbit_vertices) v += t;
    const TriSurface moved = materialize_patch(shifted, 3);
    REQUIRE(moved.vertices.size() == patch.vertices.size());
    CHECK(moved.faces == patch.faces);
    double worst = 0;
    for (std::size_t i = 0; i < patch.vertices.size(); ++i)
      worst = std::max(worst, (moved.vertices[i] - patch.vertices[i] - t).norm());
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("edge orbits and basis change") {
  const PeriodicSurface p = periodic_from_dome(two_triangles(1.3));
  const auto orbits = edge_orbits(p);
  // Torus with V orbit vertices and F faces has E = V + F edges.
  CHECK(orbits.size() == p.orbit_vertices.size() + p.faces.size());
  const PeriodicSurface q = change_basis(p, 2, 1, 1, 1);
  CHECK((q.alpha - (2 * p.alpha + p.beta)).norm() < 1e-12);
  CHECK(edge_orbits(q).size() == orbits.size());
  const GramMatrix g = gram_of(p), h = gram_of(q);
  CHECK(h.determinant() == doctest::Approx(g.determinant()).epsilon(1e-12));
  CHECK(periodic_flex_dimension(q).infinitesimal_dim == periodic_flex_dimension(p).infinitesimal_dim);
  CHECK_THROWS_AS(change_basis(p, 2, 0, 0, 1), Error);
}

TEST_CASE("bricard octahedron flexes") {
  const BricardParams bp;
  const BricardOctahedron a = bricard_octahedron(bp, 1.7), b = bricard_octahedron(bp, 1.9);
  CHECK(a.surface.faces.size() == 8);
  CHECK(boundary_of(a.surface).empty());
  CHECK(edges_of(a.surface).size() == 12);
  CHECK(edge_spread(a.surface, b.surface) < 1e-12);
  CHECK(alignment_residual(a.surface, b.surface) > 1e-6);
  CHECK_THROWS_AS(bricard_octahedron(bp, 5.0), Error);
  BricardParams flat = bp;
  flat.lift = 0;
  flat.a1.z() = 0;
  CHECK_THROWS_AS(bricard_octahedron(flat, 1.7), Error);
}

TEST_CASE("rigidity of closed surfaces") {
  CHECK(flex_dimension(octahedron()).infinitesimal_dim == 0);
  CHECK(oracle_flex_dim(octahedron()) == 0);
  CHECK(flex_dimension(icosahedron()).infinitesimal_dim == 0);
  CHECK(oracle_flex_dim(icosahedron()) == 0);
  CHECK(flex_dimension(tetrahedron()).infinitesimal_dim == 0);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ut(1.55, 2.04);
  for (int i = 0; i < 5; ++i) {
    const BricardOctahedron b = bricard_octahedron({}, ut(rng));
    const FlexReport r = flex_dimension(b.surface);
    CHECK(r.infinitesimal_dim == 1);
    CHECK(oracle_flex_dim(b.surface) == 1);
    CHECK(r.gap_ratio >= 1e3);
  }
}

TEST_CASE("a single triangle is rigid") {
  TriSurface t;
  t.add_vertex({0, 0, 0});
  t.add_vertex({1, 0, 0});
  t.add_vertex({0.5, 0.8, 0});
  t.add_face(0, 1, 2);
  const FlexReport r = flex_dimension(t);
  CHECK(r.infinitesimal_dim == 0);
  CHECK(r.removed_modes == 6);
}

TEST_CASE("chessboard surfaces have one periodic flex") {
  FlexOptions follow;
  follow.path_following = true;
  const FlexReport sq = periodic_flex_dimension(periodic_from_dome(square_pyramid()), {}, follow);
  CHECK(sq.infinitesimal_dim == 1);
  CHECK(sq.finite_flex_confirmed.value_or(-1) == 1);
  CHECK(sq.gap_ratio >= 1e3);
  const FlexReport two = periodic_flex_dimension(periodic_from_dome(two_triangles(1.3)));
  CHECK(two.infinitesimal_dim == 1);
}

TEST_CASE("flat periodic triangulation is flagged") {
  TriSurface flat;
  flat.unit_flag = false;
  for (Point3 v : {Point3(-.5, -.5, 0), Point3(.5, -.5, 0), Point3(.5, .5, 0), Point3(-.5, .5, 0)}) flat.add_vertex(v);
  flat.add_face(0, 1, 2);
  flat.add_face(0, 2, 3);
  const FlexReport r = periodic_flex_dimension(periodic_from_dome(flat));
  CHECK(r.coplanar);
}

TEST_CASE("accordion") {
  const AccordionResult acc = build_accordion();
  CHECK_NOTHROW(acc.surface.validate());
  const GramMatrix g = gram_of(acc.surface);
  CHECK_FALSE(g.degenerate());
  CHECK(std::abs(g.g12) > 1e-6);
  CHECK(std::abs(acc.axis_rate) > 1e-6);
  const TriSurface patch = materialize_patch(acc.surface, 2);
  CHECK(boundary_loops(patch).size() >= 1);

  FlexOptions follow;
  follow.path_following = true;
  const FlexReport r = periodic_flex_dimension(acc.surface, {}, follow);
  CHECK(r.infinitesimal_dim == 3);
  CHECK(r.gap_ratio >= 1e3);
  CHECK(r.finite_flex_confirmed.value_or(-1) == 3);
}

TEST_CASE("accordion configuration errors") {
  AccordionConfig single;
  single.with_connector = false;
  CHECK_THROWS_AS(build_accordion(single), Error);
  AccordionConfig face0;
  face0.pyramid_face_1 = 0;
  try {
    build_accordion(face0);
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
  // Every accepted face pair changes the axis length under the flex.
  for (int i = 1; i < 8; ++i)
    for (int j = 1; j < 8; ++j) {
      if (i == j) continue;
      AccordionConfig c;
      c.pyramid_face_1 = i;
      c.pyramid_face_2 = j;
      CHECK(std::abs(build_accordion(c).axis_rate) > 1e-6);
    }
}
