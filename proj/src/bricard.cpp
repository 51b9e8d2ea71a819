#include <cmath>

#include <Eigen/Dense>

#include "domes/periodic.hpp"

namespace domes {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

// Shape unknowns: |c1 c2|, twist, lift, a1.
struct Shape {
  double t;
  Vec6 x;

  std::array<Point3, 6> points() const {
    const double d2 = x[0], phi = x[1], h = x[2];
    const Point3 a1(x[3], x[4], x[5]);
    const Point3 c1(0.5 * d2 * std::cos(phi), 0.5 * d2 * std::sin(phi), h);
    return {a1, Point3(-a1.x(), -a1.y(), a1.z()), Point3(0.5 * t, 0, 0), Point3(-0.5 * t, 0, 0), c1,
            Point3(-c1.x(), -c1.y(), h)};
  }
};

std::array<double, 6> squared_lengths(const std::array<Point3, 6>& v) {
  // a1 a2 b1 b2 c1 c2 = 0..5
  return {(v[2] - v[4]).squaredNorm(), (v[4] - v[3]).squaredNorm(), (v[0] - v[2]).squaredNorm(),
          (v[0] - v[3]).squaredNorm(), (v[0] - v[4]).squaredNorm(), (v[0] - v[5]).squaredNorm()};
}

Vec6 residual(const Shape& s, const std::array<double, 6>& target2) {
  const auto l = squared_lengths(s.points());
  Vec6 r;
  for (int i = 0; i < 6; ++i) r[i] = l[i] - target2[i];
  return r;
}

bool newton(Shape& s, const std::array<double, 6>& target2) {
  for (int it = 0; it < 60; ++it) {
    const Vec6 r = residual(s, target2);
    if (r.cwiseAbs().maxCoeff() < 1e-14) return true;
    Eigen::Matrix<double, 6, 6> jac;
    for (int j = 0; j < 6; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(s.x[j]));
      Shape up = s, down = s;
      up.x[j] += h;
      down.x[j] -= h;
      jac.col(j) = (residual(up, target2) - residual(down, target2)) / (2 * h);
    }
    const auto lu = jac.fullPivLu();
    if (lu.rank() < 6) return false;
    s.x -= lu.solve(r);
    if (!s.x.allFinite()) return false;
  }
  return residual(s, target2).cwiseAbs().maxCoeff() < 1e-12;
}

}  // namespace

void BricardParams::check() const {
  if (!(diagonal_b > 0 && diagonal_c > 0)) fail(ErrorKind::Construction, "diagonals must be positive");
  const bool flat = std::abs(lift) < 1e-9 && std::abs(a1.z()) < 1e-9;
  const bool folded = std::abs(std::sin(twist)) < 1e-9 && std::abs(a1.y()) < 1e-9;
  if (flat || folded) fail(ErrorKind::Construction, "octahedron parameters are planar");
  if (std::hypot(a1.x(), a1.y()) < 1e-9) fail(ErrorKind::Construction, "a1 lies on the symmetry axis");
}

std::array<Face, 8> octahedron_faces() {
  std::array<Face, 8> f{};
  int k = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 2; b < 4; ++b)
      for (int c = 4; c < 6; ++c) {
        const bool even = (a + b + c) % 2 == 0;
        f[k++] = even ? Face{a, b, c} : Face{a, c, b};
      }
  return f;
}

BricardOctahedron bricard_octahedron(const BricardParams& params, double t) {
  params.check();
  Shape s{params.diagonal_b, Vec6()};
  s.x << params.diagonal_c, params.twist, params.lift, params.a1.x(), params.a1.y(), params.a1.z();
  const auto target2 = squared_lengths(s.points());
  if (!(t > 0)) fail(ErrorKind::Construction, "flex parameter must be positive");

  // Continuation from the reference diagonal to t.
  const double t0 = params.diagonal_b;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t - t0) / 0.01)));
  Vec6 prev = s.x;
  for (int i = 1; i <= steps; ++i) {
    const Vec6 guess = s.x + (s.x - prev);  // linear predictor
    prev = s.x;
    s.t = t0 + (t - t0) * i / steps;
    s.x = i > 1 ? guess : s.x;
    if (!newton(s, target2))
      fail(ErrorKind::Construction, "flex parameter " + std::to_string(t) + " lies outside the flex interval");
  }
  const auto pts = s.points();
  BricardOctahedron out;
  out.surface.unit_flag = false;
  for (const Point3& p : pts) out.surface.add_vertex(p);
  for (const Face& f : octahedron_faces()) out.surface.add_face(f[0], f[1], f[2]);
  for (int i = 0; i < 6; ++i) out.lengths[i] = std::sqrt(target2[i]);
  return out;
}

}  // namespace domes
