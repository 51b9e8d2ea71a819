#include "domes/periodic.hpp"

#include <cmath>
#include <map>
#include <set>
#include <tuple>

namespace domes {

void PeriodicSurface::validate(const Tolerance& tol) const {
  if (alpha.cross(beta).norm() <= tol.geom_tol * std::max(1.0, alpha.norm() * beta.norm()))
    fail(ErrorKind::Precondition, "periodicity vectors are linearly dependent");
  const int n = static_cast<int>(orbit_vertices.size());
  for (const PeriodicFace& f : faces) {
    for (const LatticeRef& r : f)
      if (r.vertex < 0 || r.vertex >= n) fail(ErrorKind::Malformed, "face refers to a missing orbit vertex");
    for (int i = 0; i < 3; ++i)
      if (f[i] == f[(i + 1) % 3]) fail(ErrorKind::NonManifold, "face repeats a lattice point");
    const Point3 a = position(f[0]), b = position(f[1]), c = position(f[2]);
    if ((b - a).cross(c - a).norm() <= 1e-12 * std::max(1.0, (b - a).squaredNorm()))
      fail(ErrorKind::Malformed, "degenerate face");
  }
}

bool GramMatrix::degenerate(double tol) const {
  return determinant() <= tol * std::max(1e-300, g11 * g22);
}

GramMatrix gram_of(const PeriodicSurface& p) {
  return {p.alpha.dot(p.alpha), p.alpha.dot(p.beta), p.beta.dot(p.beta)};
}

PeriodicSurface quotient_of(const std::vector<Point3>& points, const std::vector<Face>& faces,
                            const Point3& alpha, const Point3& beta, const Tolerance& tol) {
  PeriodicSurface out;
  out.alpha = alpha;
  out.beta = beta;
  Eigen::Matrix2d gram;
  gram << alpha.dot(alpha), alpha.dot(beta), alpha.dot(beta), beta.dot(beta);
  if (std::abs(gram.determinant()) <= 1e-14 * gram(0, 0) * gram(1, 1))
    fail(ErrorKind::Precondition, "periodicity vectors are linearly dependent");
  const Eigen::Matrix2d inv = gram.inverse();
  PointIndex index(tol.geom_tol);
  std::vector<LatticeRef> ref(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point3& x = points[i];
    const Eigen::Vector2d km = inv * Eigen::Vector2d(alpha.dot(x), beta.dot(x));
    const int k0 = static_cast<int>(std::floor(km[0])), m0 = static_cast<int>(std::floor(km[1]));
    bool found = false;
    for (int dk = -1; dk <= 1 && !found; ++dk)
      for (int dm = -1; dm <= 1 && !found; ++dm) {
        const int id = index.find(x - (k0 + dk) * alpha - (m0 + dm) * beta);
        if (id >= 0) {
          ref[i] = {id, k0 + dk, m0 + dm};
          found = true;
        }
      }
    if (!found) {
      const int id = static_cast<int>(out.orbit_vertices.size());
      out.orbit_vertices.push_back(x - k0 * alpha - m0 * beta);
      index.insert(out.orbit_vertices.back(), id);
      ref[i] = {id, k0, m0};
    }
  }
  for (const Face& f : faces) out.faces.push_back({ref[f[0]], ref[f[1]], ref[f[2]]});
  out.validate(tol);
  return out;
}

PeriodicSurface periodic_from_dome(const TriSurface& dome, const Tolerance& tol) {
  const auto loops = boundary_loops(dome);
  if (loops.size() != 1 || loops[0].size() != 4)
    fail(ErrorKind::Precondition, "dome boundary is not a quadrilateral");
  const auto& b = loops[0];
  const Point3 v = dome.vertices[b[0]], p = dome.vertices[b[1]];
  const Point3 w = dome.vertices[b[2]], q = dome.vertices[b[3]];
  for (int i = 0; i < 4; ++i) {
    const double len = (dome.vertices[b[(i + 1) % 4]] - dome.vertices[b[i]]).norm();
    if (std::abs(len - 1.0) > tol.geom_tol) fail(ErrorKind::Precondition, "boundary edges are not unit");
  }
  if (dome.unit_flag && max_unit_edge_deviation(dome) > tol.geom_tol)
    fail(ErrorKind::Precondition, "dome has non-unit edges");

  // White cell at the origin, black cell is the point reflection shifted by p + w.
  std::vector<Point3> pts = dome.vertices;
  const Point3 shift = p + w;
  const int n = static_cast<int>(dome.vertices.size());
  for (const Point3& x : dome.vertices) pts.push_back(shift - x);
  std::vector<Face> faces = dome.faces;
  for (const Face& f : dome.faces) faces.push_back({f[0] + n, f[1] + n, f[2] + n});
  PeriodicSurface out = quotient_of(pts, faces, w - v, p - q, tol);
  out.unit_flag = dome.unit_flag;
  return out;
}

TriSurface materialize_patch(const PeriodicSurface& p, int k) {
  if (k < 1) fail(ErrorKind::Precondition, "patch size must be positive");
  TriSurface s;
  s.unit_flag = p.unit_flag;
  std::map<std::tuple<int, int, int>, int> index;
  auto vertex = [&](const LatticeRef& r) {
    const auto key = std::make_tuple(r.vertex, r.p, r.q);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = s.add_vertex(p.position(r));
    index.emplace(key, id);
    return id;
  };
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (const PeriodicFace& f : p.faces) {
        std::array<int, 3> idx{};
        for (int i = 0; i < 3; ++i) idx[i] = vertex({f[i].vertex, f[i].p + a, f[i].q + b});
        s.faces.push_back({idx[0], idx[1], idx[2]});
      }
  return s;
}

PeriodicSurface change_basis(const PeriodicSurface& p, int a, int b, int c, int d) {
  const int det = a * d - b * c;
  if (det != 1 && det != -1) fail(ErrorKind::Precondition, "basis change must be unimodular");
  PeriodicSurface out = p;
  out.alpha = a * p.alpha + b * p.beta;
  out.beta = c * p.alpha + d * p.beta;
  // Old offsets (x, y) satisfy x = a x' + c y', y = b x' + d y'.
  for (auto& f : out.faces)
    for (auto& r : f) {
      const int x = r.p, y = r.q;
      r.p = det * (d * x - c * y);
      r.q = det * (-b * x + a * y);
    }
  return out;
}

std::vector<std::pair<LatticeRef, LatticeRef>> edge_orbits(const PeriodicSurface& p) {
  std::set<std::tuple<int, int, int, int>> seen;
  std::vector<std::pair<LatticeRef, LatticeRef>> out;
  for (const PeriodicFace& f : p.faces)
    for (int i = 0; i < 3; ++i) {
      LatticeRef u = f[i], v = f[(i + 1) % 3];
      if (u.vertex > v.vertex) std::swap(u, v);
      LatticeRef rel{v.vertex, v.p - u.p, v.q - u.q};
      // An edge to the own translate is stored with a positive offset.
      if (u.vertex == v.vertex && (rel.p < 0 || (rel.p == 0 && rel.q < 0))) rel = {v.vertex, -rel.p, -rel.q};
      if (seen.insert({u.vertex, rel.vertex, rel.p, rel.q}).second)
        out.push_back({{u.vertex, 0, 0}, rel});
    }
  return out;
}

}  // namespace domes
