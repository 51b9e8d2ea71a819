#include <doctest.h>

#include <numeric>

#include "domes/flatten_pack.hpp"
#include "support.hpp"

using namespace domes;
using namespace fixtures;

namespace {

// Minimax prefix norm over all orders.
double brute_minimax(const std::vector<Vec2>& u) {
  std::vector<int> p(u.size());
  std::iota(p.begin(), p.end(), 0);
  double best = 1e300;
  do {
    Vec2 s = Vec2::Zero();
    double worst = 0;
    for (int i : p) worst = std::max(worst, (s += u[i]).norm());
    best = std::min(best, worst);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

// Applies every flip of the plan one at a time and checks each patch.
void check_patches(const IntegralCurve& c, const FlipPlan& plan) {
  IntegralCurve cur = c;
  for (const FlipStep& s : plan.steps) {
    const FlipResult f = flip_apply(cur, s);
    if (!f.patch.faces.empty()) {
      const auto b = boundary_of(f.patch);
      REQUIRE(b.size() == 1);
      CHECK(verify_dome(f.patch, b[0]).pass);
    }
    CHECK(validate_curve(f.curve).pass);
    cur = f.curve;
  }
}

std::vector<Vec2> random_zero_sum(int n, std::mt19937_64& rng) {
  // Closed planar unit walk: random angles, then a fix-up pair closes it.
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  while (true) {
    std::vector<Vec2> u;
    Vec2 s = Vec2::Zero();
    for (int i = 0; i < n - 2; ++i) {
      const double t = ang(rng);
      u.emplace_back(std::cos(t), std::sin(t));
      s += u.back();
    }
    const double d = s.norm();
    if (d >= 2 || d < 1e-6) continue;
    const Vec2 mid = -s / 2, perp = Vec2(-s.y(), s.x()).normalized() * std::sqrt(1 - d * d / 4);
    u.push_back(mid + perp);
    u.push_back(mid - perp);
    return u;
  }
}

}  // namespace

TEST_CASE("perturb_generic keeps lengths and stays close") {
  const IntegralCurve c = folded_curve(5, 9);
  const IntegralCurve p = perturb_generic(c, 1e-3, 4);
  CHECK(frechet_distance(c, p) < 1e-3);
  const auto rep = validate_curve(p, {1e-12, 1e-8});
  CHECK(rep.pass);

  const IntegralCurve flat = IntegralCurve::unit({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {2, 1, 0}, {1, 1, 0}, {0, 1, 0}});
  const IntegralCurve fixed = perturb_generic(flat, 1e-3, 1);
  CHECK((fixed[0] - fixed[2]).norm() < 2.0);
  CHECK(frechet_distance(flat, fixed) < 1e-3);
  CHECK(validate_curve(fixed).pass);

  CHECK_THROWS_AS(perturb_generic(c, 0.0, 1), Error);
  CHECK(perturb_generic(c, 1e-3, 4).vertices == p.vertices);
}

TEST_CASE("planarize") {
  const IntegralCurve flat = perturb_generic(fixtures::planar_regular(6), 1e-4, 2);
  LinearFunctional z;
  const PlanarizeResult none = planarize(flat, z, {1e-3});
  CHECK(none.plan.empty());

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const IntegralCurve c = perturb_generic(folded_curve(6, seed), 1e-6, seed);
    const LinearFunctional f = LinearFunctional::random(seed);
    const PlanarizeResult r = planarize(c, f, {1e-3});
    CHECK(r.spread < 1e-3);
    CHECK(functional_spread(r.curve, f) == doctest::Approx(r.spread));
    check_patches(c, r.plan);
    CHECK(frechet_distance(apply_plan(c, r.plan).curve, r.curve) < 1e-9);
  }
}

TEST_CASE("planarize on a non-generic functional either stalls or converges") {
  // Two vertices on the same level as their common neighbours.
  const IntegralCurve c = IntegralCurve::unit({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  LinearFunctional f;
  f.coefficients = {0, 0, 1};
  try {
    const PlanarizeResult r = planarize(c, f, {1e-3});
    CHECK(r.spread < 1e-3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Stall);
  }
}

TEST_CASE("steinitz order for hexagon directions") {
  std::vector<Vec2> u;
  for (int i = 0; i < 6; ++i) u.emplace_back(std::cos(i * kPi / 3), std::sin(i * kPi / 3));
  const SteinitzResult r = steinitz_permutation(u);
  CHECK(r.exhaustive);
  CHECK(r.max_prefix <= std::sqrt(1.25) + 1e-9);
  CHECK(r.max_prefix == doctest::Approx(brute_minimax(u)).epsilon(1e-12));
  CHECK(max_prefix_norm(u, r.order) == doctest::Approx(r.max_prefix));
}

// Unit edge steps of the (k,k,1) triangle: one base step, k steps up each side.
std::vector<Vec2> isosceles_steps(int k) {
  const Vec2 apex(0.5, std::sqrt(k * k - 0.25));
  std::vector<Vec2> u{Vec2(1, 0)};
  for (int i = 0; i < k; ++i) u.push_back((apex - Vec2(1, 0)) / k);
  for (int i = 0; i < k; ++i) u.push_back(-apex / k);
  return u;
}

TEST_CASE("steinitz order for isosceles edge steps") {
  // Values of an independent dynamic program over step counts. The sequence
  // approaches sqrt(5/4) from below and never reaches it.
  const std::vector<std::pair<int, double>> expected{{2, 1.0}, {3, 1.1055415967851332}, {4, 1.0606601717798214}};
  for (auto [k, value] : expected) {
    const auto u = isosceles_steps(k);
    const SteinitzResult r = steinitz_permutation(u);
    CHECK(std::abs(r.max_prefix - value) < 1e-9);
    CHECK(r.max_prefix < std::sqrt(1.25));
  }
  CHECK(std::abs(brute_minimax(isosceles_steps(2)) - 1.0) < 1e-12);
}

TEST_CASE("steinitz with two opposite vectors") {
  const std::vector<Vec2> u{{0.6, 0.8}, {-0.6, -0.8}};
  const SteinitzResult r = steinitz_permutation(u);
  CHECK(r.order == std::vector<int>{0, 1});
  CHECK(r.max_prefix == doctest::Approx(1.0));
}

TEST_CASE("property: exact steinitz matches brute force and the planar bound") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    const int n = 3 + static_cast<int>(rng() % 5);
    const auto u = random_zero_sum(n, rng);
    const SteinitzResult r = steinitz_permutation(u);
    CHECK(r.max_prefix <= std::sqrt(1.25) + 1e-9);
    CHECK(r.max_prefix == doctest::Approx(brute_minimax(u)).epsilon(1e-9));
  }
}

TEST_CASE("adjacent factorization") {
  CHECK(adjacent_factorization(std::vector<int>{0, 1, 2}).empty());
  CHECK(adjacent_factorization(std::vector<int>{1, 0}) == std::vector<int>{1});
  CHECK(adjacent_factorization(std::vector<int>{3, 2, 1, 0}).size() == 6);
  // Exhaustive for n <= 6: recomposition and length.
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
      const auto swaps = adjacent_factorization(p);
      std::vector<int> q(n);
      std::iota(q.begin(), q.end(), 0);
      for (int k : swaps) std::swap(q[k - 1], q[k]);
      CHECK(q == p);
      CHECK(static_cast<std::int64_t>(swaps.size()) == inversion_count(p));
    } while (std::next_permutation(p.begin(), p.end()));
  }
}

TEST_CASE("pack_curve") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const IntegralCurve c = perturb_generic(folded_curve(4 + static_cast<int>(seed % 5), seed + 100), 1e-6, seed);
    const LinearFunctional f = LinearFunctional::random(seed);
    const PackResult r = pack_curve(c, f);
    double far = 0;
    for (const Point3& v : r.curve.vertices) far = std::max(far, (v - r.curve[0]).norm());
    CHECK(far <= 1.5 + 1e-9);
    CHECK(r.max_radius == doctest::Approx(far));
    CHECK(frechet_distance(apply_plan(c, r.plan).curve, r.curve) < 1e-9);
    CHECK(r.plan.steps.size() - r.planarize_steps == static_cast<std::size_t>(inversion_count(r.order)));
    check_patches(c, r.plan);
  }
}

TEST_CASE("pack_curve leaves a packed near-planar curve alone") {
  const IntegralCurve c = perturb_generic(fixtures::planar_regular(4), 1e-4, 5);
  LinearFunctional z;
  const PackResult r = pack_curve(c, z);
  CHECK(r.plan.steps.size() == r.planarize_steps);
  CHECK(inversion_count(r.order) == 0);
}
