#pragma once

// Fixtures and reference computations shared by the test binaries. The
// oracles use the plainest formulas available and none of the library code
// they check.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "domes/geom.hpp"

namespace fixtures {

using domes::IntegralCurve;
using domes::Point3;
using domes::TriSurface;

inline const double kPi = std::numbers::pi;

inline TriSurface square_pyramid() {
  TriSurface s;
  s.add_vertex({-0.5, -0.5, 0});
  s.add_vertex({0.5, -0.5, 0});
  s.add_vertex({0.5, 0.5, 0});
  s.add_vertex({-0.5, 0.5, 0});
  s.add_vertex({0, 0, std::sqrt(0.5)});
  for (int i = 0; i < 4; ++i) s.add_face(i, (i + 1) % 4, 4);
  return s;
}

inline IntegralCurve unit_square() { return IntegralCurve::unit({{-0.5, -0.5, 0}, {0.5, -0.5, 0}, {0.5, 0.5, 0}, {-0.5, 0.5, 0}}); }

inline IntegralCurve planar_regular(int n, double side = 1.0) {
  const double r = side / (2 * std::sin(kPi / n));
  std::vector<Point3> v;
  for (int j = 0; j < n; ++j) v.emplace_back(r * std::cos(2 * kPi * j / n), r * std::sin(2 * kPi * j / n), 0);
  IntegralCurve c;
  c.vertices = v;
  c.lengths.assign(n, static_cast<int>(std::lround(side)));
  return c;
}

inline TriSurface octahedron() {
  TriSurface s;
  const double h = 1 / std::sqrt(2.0);
  for (Point3 p : {Point3(h, 0, 0), Point3(-h, 0, 0), Point3(0, h, 0), Point3(0, -h, 0), Point3(0, 0, h), Point3(0, 0, -h)})
    s.add_vertex(p);
  for (int a = 0; a < 2; ++a)
    for (int b = 2; b < 4; ++b)
      for (int c = 4; c < 6; ++c)
        if ((a + b + c) % 2 == 0)
          s.add_face(a, b, c);
        else
          s.add_face(a, c, b);
  return s;
}

inline TriSurface tetrahedron() {
  TriSurface s;
  s.add_vertex({0, 0, 0});
  s.add_vertex({1, 0, 0});
  s.add_vertex({0.5, std::sqrt(3.0) / 2, 0});
  s.add_vertex({0.5, std::sqrt(3.0) / 6, std::sqrt(2.0 / 3.0)});
  s.add_face(0, 2, 1);
  s.add_face(0, 1, 3);
  s.add_face(1, 2, 3);
  s.add_face(2, 0, 3);
  return s;
}

/// Regular icosahedron with unit edges.
inline TriSurface icosahedron() {
  TriSurface s;
  const double g = (1 + std::sqrt(5.0)) / 2;
  const std::vector<Point3> base{{-1, g, 0}, {1, g, 0},  {-1, -g, 0}, {1, -g, 0}, {0, -1, g},  {0, 1, g},
                                 {0, -1, -g}, {0, 1, -g}, {g, 0, -1},  {g, 0, 1},  {-g, 0, -1}, {-g, 0, 1}};
  for (const Point3& p : base) s.add_vertex(p / 2.0);
  const int f[20][3] = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                        {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& t : f) s.add_face(t[0], t[1], t[2]);
  return s;
}

/// Rodrigues rotation written out, independent of the library helper.
inline Point3 rotate(const Point3& p, const Point3& a, const Point3& b, double t) {
  const Point3 k = (b - a).normalized(), v = p - a;
  return a + v * std::cos(t) + k.cross(v) * std::sin(t) + k * k.dot(v) * (1 - std::cos(t));
}

/// Random unit n-gon: a planar regular polygon folded many times about
/// neighbour chords. Every fold preserves edge lengths exactly up to rounding.
inline IntegralCurve folded_curve(int n, std::uint64_t seed, int folds = 200) {
  const double r = 0.5 / std::sin(kPi / n);
  std::vector<Point3> p;
  for (int i = 0; i < n; ++i) p.emplace_back(r * std::cos(2 * kPi * i / n), r * std::sin(2 * kPi * i / n), 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int it = 0; it < folds; ++it) {
    const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const Point3 &a = p[(i + n - 1) % n], &b = p[(i + 1) % n];
    if ((b - a).norm() < 1e-6) continue;
    p[i] = rotate(p[i], a, b, 3 * u(rng));
  }
  return IntegralCurve::unit(p);
}

inline double max_edge_error(const TriSurface& s) {
  double worst = 0;
  for (const auto& f : s.faces)
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst, std::abs((s.vertices[f[i]] - s.vertices[f[(i + 1) % 3]]).norm() - 1.0));
  return worst;
}

/// Numerical rank by column-pivoted QR; a different decomposition from the SVD
/// the library uses.
inline int qr_rank(const Eigen::MatrixXd& m, double rel) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(rel);
  return static_cast<int>(qr.rank());
}

/// Random closed triangulated sphere: a tetrahedron grown by face splits and
/// shuffled by edge flips. Only the combinatorics are meaningful.
inline TriSurface random_closed_surface(std::uint64_t seed, int splits) {
  TriSurface s = tetrahedron();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 0.05);
  auto has_edge = [&](int a, int b) {
    for (const auto& f : s.faces)
      for (int i = 0; i < 3; ++i)
        if ((f[i] == a && f[(i + 1) % 3] == b) || (f[i] == b && f[(i + 1) % 3] == a)) return true;
    return false;
  };
  for (int it = 0; it < splits; ++it) {
    const std::size_t fi = rng() % s.faces.size();
    const auto f = s.faces[fi];
    const Point3 c = (s.vertices[f[0]] + s.vertices[f[1]] + s.vertices[f[2]]) / 3.0 + Point3(g(rng), g(rng), g(rng));
    const int x = static_cast<int>(s.vertices.size());
    s.vertices.push_back(c);
    s.faces[fi] = {f[0], f[1], x};
    s.faces.push_back({f[1], f[2], x});
    s.faces.push_back({f[2], f[0], x});

    // One random flip of an edge of the first new face.
    const int a = f[0], b = f[1];
    for (std::size_t gi = 0; gi < s.faces.size(); ++gi) {
      auto& h = s.faces[gi];
      for (int i = 0; i < 3; ++i) {
        if (h[i] != b || h[(i + 1) % 3] != a) continue;
        const int d = h[(i + 2) % 3];
        int deg_a = 0, deg_b = 0;
        for (const auto& e : s.faces) {
          deg_a += std::count(e.begin(), e.end(), a);
          deg_b += std::count(e.begin(), e.end(), b);
        }
        if ((rng() & 1) && deg_a > 3 && deg_b > 3 && !has_edge(x, d)) {
          s.faces[fi] = {a, d, x};
          h = {d, b, x};
        }
        gi = s.faces.size();
        break;
      }
    }
  }
  s.unit_flag = false;
  return s;
}

}  // namespace fixtures
