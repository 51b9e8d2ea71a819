#include <doctest.h>

#include "domes/rhombus.hpp"
#include "support.hpp"

using namespace domes;
using namespace fixtures;

namespace {

// Fan over the axis (-a/2,0,0)-(a/2,0,0) starting below it.
TriSurface fan(double a, int m, int orientation = 1) {
  const Point3 v(-a / 2, 0, 0), w(a / 2, 0, 0), start(0, -std::sqrt(1 - a * a / 4), 0);
  return fan_dome(v, w, start, m, orientation);
}

long double chord_oracle(long double a, int m) {
  const long double al = std::asin(1.0L / std::sqrt(4.0L - a * a));
  return std::sqrt(4.0L - a * a) * std::fabs(std::sin(m * al));
}

}  // namespace

TEST_CASE("fan angle closed forms and domain") {
  CHECK(fan_angle(std::sqrt(2.0)) == doctest::Approx(kPi / 4).epsilon(1e-15));
  // asin is square-root conditioned at 1.
  CHECK(fan_angle(std::sqrt(3.0)) == doctest::Approx(kPi / 2).epsilon(1e-7));
  CHECK_THROWS_AS(fan_angle(2.0), Error);
  CHECK_THROWS_AS(fan_angle(1.8), Error);
  CHECK_THROWS_AS(fan_angle(0.0), Error);
  CHECK_THROWS_AS(fan_angle(-1.0), Error);
}

TEST_CASE("chord lengths") {
  for (double a : {0.3, 1.0, 1.3, 1.7}) CHECK(chord_length(a, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(chord_length(std::sqrt(2.0), 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(chord_length(std::sqrt(2.0), 4)) < 1e-15);
  CHECK_THROWS_AS(chord_length(2.0, 3), Error);
}

TEST_CASE("fan over the square diagonal is the square pyramid") {
  const TriSurface s = fan(std::sqrt(2.0), 2);
  CHECK(s.faces.size() == 4);
  const auto b = boundary_of(s);
  REQUIRE(b.size() == 1);
  CHECK(verify_dome(s, b[0]).pass);
  // Boundary is planar with both diagonals sqrt 2.
  const Point3 p0 = s.vertices[2], p2 = s.vertices.back();
  CHECK((p0 - p2).norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(verify_dome(s, unit_square(), {}, true).pass);
  CHECK(verify_dome(square_pyramid(), b[0], {}, true).pass);
}

TEST_CASE("fan with one pair and with three pairs") {
  const TriSurface one = fan(1.1, 1);
  CHECK(one.faces.size() == 2);
  CHECK((one.vertices[2] - one.vertices[3]).norm() == doctest::Approx(1.0).epsilon(1e-14));

  const TriSurface three = fan(1.3, 3);
  CHECK(three.faces.size() == 6);
  const double built = (three.vertices[2] - three.vertices.back()).norm();
  CHECK(std::abs(built - static_cast<double>(chord_oracle(1.3L, 3))) < 1e-12);
  CHECK(max_edge_error(three) < 1e-12);
}

TEST_CASE("fan_dome rejects a start point off the unit circle") {
  CHECK_THROWS_AS(fan_dome({0, 0, 0}, {1, 0, 0}, {0.5, 0.5, 0}, 2), Error);
}

TEST_CASE("property: constructed chords match the closed form and stay unit") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(0.1, 1.7);
  for (int t = 0; t < 300; ++t) {
    const double a = ua(rng);
    const int m = 1 + static_cast<int>(rng() % 50);
    const int sign = (rng() & 1) ? 1 : -1;
    const TriSurface s = fan(a, sign * m);
    const double c = (s.vertices[2] - s.vertices.back()).norm();
    CHECK(std::abs(c - static_cast<double>(chord_oracle(a, m))) < 1e-10);
    CHECK(std::abs(c - chord_length(a, m)) < 1e-10);
    CHECK(max_edge_error(s) < 1e-12);
    const auto b = boundary_of(s);
    REQUIRE(b.size() == 1);
    CHECK(verify_dome(s, b[0]).pass);
    CHECK(a * a + c * c <= 4 + 1e-9);
  }
}

TEST_CASE("property: chord lengths are dense") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ua(0.2, 1.6), ut(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double a = ua(rng);
    const double target = ut(rng) * std::sqrt(4 - a * a);
    const MultiplierChoice ch = find_multiplier(a, target, 10000, 1e-2);
    CHECK(ch.m >= 1);
    CHECK(ch.m <= 10000);
    CHECK(ch.error < 1e-2);
  }
}

TEST_CASE("flip_apply basics") {
  const IntegralCurve sq = unit_square();
  const FlipResult none = flip_apply(sq, {2, 0});
  CHECK(none.curve.vertices == sq.vertices);
  CHECK(none.patch.faces.empty());

  // Axis sqrt 2 and two pairs: the vertex turns by a half turn.
  const FlipResult half = flip_apply(sq, {2, 2});
  const Point3 expected = sq.vertices[0] + sq.vertices[2] - sq.vertices[1];
  CHECK((half.curve.vertices[1] - expected).norm() < 1e-12);

  const FlipResult back = flip_apply(half.curve, {2, -2});
  CHECK(frechet_distance(back.curve, sq) < 1e-12);

  CHECK_THROWS_AS(flip_apply(planar_regular(7), {2, 1}), Error);  // chord above sqrt 3
}

TEST_CASE("property: flips change one vertex and invert") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const IntegralCurve c = folded_curve(5 + static_cast<int>(seed % 5), seed);
    const int n = static_cast<int>(c.size());
    const int k = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(n));
    const double axis = (c[(k + n - 2) % n] - c[k % n]).norm();
    if (axis >= std::sqrt(3.0) - 1e-6 || axis < 1e-3) continue;
    const int m = static_cast<int>(seed % 7) - 3;
    const FlipResult f = flip_apply(c, {k, m});
    for (int i = 0; i < n; ++i)
      if (i != k - 1) CHECK(f.curve.vertices[i] == c.vertices[i]);
    CHECK(validate_curve(f.curve).pass);
    const FlipResult g = flip_apply(f.curve, {k, -m});
    CHECK(frechet_distance(g.curve, c) < 1e-10);
    if (m != 0) {
      const auto b = boundary_of(f.patch);
      REQUIRE(b.size() == 1);
      const double d1 = (b[0].vertices[0] - b[0].vertices[2]).norm(), d2 = (b[0].vertices[1] - b[0].vertices[3]).norm();
      CHECK(d1 * d1 + d2 * d2 <= 4 + 1e-9);
    }
  }
}

TEST_CASE("apply_plan folds flips") {
  const IntegralCurve c = folded_curve(6, 77);
  const PlanResult empty = apply_plan(c, {});
  CHECK(empty.curve.vertices == c.vertices);
  CHECK(empty.surface.faces.empty());

  FlipPlan plan;
  IntegralCurve cur = c;
  for (int k = 1; k <= 6; ++k) {
    const double axis = (cur[(k + 4) % 6] - cur[k % 6]).norm();
    if (axis >= std::sqrt(3.0) - 1e-6) continue;
    plan.steps.push_back({k, k % 2 ? 2 : -3});
    cur = flip_apply(cur, plan.steps.back()).curve;
  }
  REQUIRE_FALSE(plan.empty());
  const PlanResult single = apply_plan(c, FlipPlan{{plan.steps[0]}});
  CHECK(single.curve.vertices == flip_apply(c, plan.steps[0]).curve.vertices);

  const PlanResult fwd = apply_plan(c, plan);
  CHECK(fwd.surface.faces.size() == static_cast<std::size_t>(plan.face_count()));
  CHECK(max_edge_error(fwd.surface) < 1e-9);
  const PlanResult round = apply_plan(fwd.curve, plan.inverse());
  CHECK(frechet_distance(round.curve, c) < 1e-10);

  FlipPlan bad{{{1, 1}, {99, 1}}};
  CHECK_THROWS_AS(apply_plan(c, bad), Error);
}
