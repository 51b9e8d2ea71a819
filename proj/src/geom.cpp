#include "domes/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <Eigen/Geometry>
#include <Eigen/SVD>

namespace domes {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}


}  // namespace

void Tolerance::check() const {
  if (!(geom_tol > 0.0) || !(rank_tol > 0.0))
    fail(ErrorKind::Precondition, "tolerances must be strictly positive");
}

IntegralCurve IntegralCurve::unit(std::vector<Point3> vertices) {
  IntegralCurve c;
  c.lengths.assign(vertices.size(), 1);
  c.vertices = std::move(vertices);
  return c;
}

IntegralCurve IntegralCurve::rounded(std::vector<Point3> vertices) {
  IntegralCurve c;
  const std::size_t n = vertices.size();
  c.lengths.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    c.lengths[i] = static_cast<int>(std::lround((vertices[(i + 1) % n] - vertices[i]).norm()));
  c.vertices = std::move(vertices);
  return c;
}

int IntegralCurve::total_length() const {
  return std::accumulate(lengths.begin(), lengths.end(), 0);
}

void TriSurface::add_face(int a, int b, int c) {
  const int n = static_cast<int>(vertices.size());
  if (a == b || b == c || a == c || a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n)
    fail(ErrorKind::Construction, "face must reference three distinct existing vertices");
  const Point3 e1 = vertices[b] - vertices[a];
  const Point3 e2 = vertices[c] - vertices[a];
  const double scale = std::max({e1.squaredNorm(), e2.squaredNorm(), 1e-300});
  if (e1.cross(e2).norm() <= 1e-12 * scale)
    fail(ErrorKind::Construction, "degenerate (collinear) face");
  faces.push_back({a, b, c});
}

CurveReport validate_curve(const IntegralCurve& c, const Tolerance& tol) {
  const std::size_t n = c.size();
  if (n < 3) fail(ErrorKind::Malformed, "a curve needs at least 3 vertices");
  if (c.lengths.size() != n)
    fail(ErrorKind::Malformed, "one declared length per edge is required");
  CurveReport report;
  report.deviations.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (c.lengths[i] <= 0) fail(ErrorKind::Malformed, "declared lengths must be positive integers");
    const double len = (c[i + 1] - c[i]).norm();
    report.deviations[i] = std::abs(len - c.lengths[i]);
    if (!(report.deviations[i] <= tol.geom_tol) && report.pass) {
      report.pass = false;
      report.first_failing_edge = static_cast<int>(i);
    }
  }
  return report;
}

double frechet_distance(std::span<const Point3> a, std::span<const Point3> b) {
  if (a.size() != b.size()) fail(ErrorKind::Dimension, "curves have different vertex counts");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a[i] - b[i]).norm());
  return d;
}

double frechet_distance(const IntegralCurve& a, const IntegralCurve& b) {
  return frechet_distance(std::span<const Point3>(a.vertices), std::span<const Point3>(b.vertices));
}

std::vector<std::pair<int, int>> edges_of(const TriSurface& s) {
  std::vector<std::uint64_t> keys;
  keys.reserve(s.faces.size() * 3);
  for (const Face& f : s.faces)
    for (int k = 0; k < 3; ++k) keys.push_back(edge_key(f[k], f[(k + 1) % 3]));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<std::pair<int, int>> out;
  out.reserve(keys.size());
  for (auto k : keys) out.emplace_back(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu));
  return out;
}

double max_unit_edge_deviation(const TriSurface& s) {
  double d = 0.0;
  for (auto [a, b] : edges_of(s)) d = std::max(d, std::abs((s.vertices[a] - s.vertices[b]).norm() - 1.0));
  return d;
}

bool orient_consistently(TriSurface& s) {
  std::unordered_map<std::uint64_t, std::vector<int>> by_edge;
  for (int f = 0; f < static_cast<int>(s.faces.size()); ++f)
    for (int k = 0; k < 3; ++k) by_edge[edge_key(s.faces[f][k], s.faces[f][(k + 1) % 3])].push_back(f);
  auto has_directed = [&](int f, int a, int b) {
    for (int k = 0; k < 3; ++k)
      if (s.faces[f][k] == a && s.faces[f][(k + 1) % 3] == b) return true;
    return false;
  };
  std::vector<char> seen(s.faces.size(), 0);
  bool orientable = true;
  for (int root = 0; root < static_cast<int>(s.faces.size()); ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      for (int k = 0; k < 3; ++k) {
        const int a = s.faces[f][k], b = s.faces[f][(k + 1) % 3];
        for (int g : by_edge[edge_key(a, b)]) {
          if (g == f) continue;
          const bool clash = has_directed(g, a, b);
          if (!seen[g]) {
            if (clash) std::swap(s.faces[g][1], s.faces[g][2]);
            seen[g] = 1;
            stack.push_back(g);
          } else if (clash) {
            orientable = false;
          }
        }
      }
    }
  }
  return orientable;
}

std::vector<std::vector<int>> boundary_loops(const TriSurface& s) {
  struct EdgeUse {
    int count = 0;
    int from = 0, to = 0;  // direction in the (last) owning face
  };
  std::unordered_map<std::uint64_t, EdgeUse> uses;
  uses.reserve(s.faces.size() * 3);
  for (const Face& f : s.faces)
    for (int k = 0; k < 3; ++k) {
      auto& u = uses[edge_key(f[k], f[(k + 1) % 3])];
      ++u.count;
      u.from = f[k];
      u.to = f[(k + 1) % 3];
      if (u.count > 2) {
        std::ostringstream os;
        os << "edge (" << f[k] << "," << f[(k + 1) % 3] << ") is shared by more than two faces";
        fail(ErrorKind::NonManifold, os.str());
      }
    }

  // Boundary edges, indexed per vertex; each entry is (other end, edge id).
  struct BEdge {
    int from, to;
    bool used = false;
  };
  std::vector<BEdge> bedges;
  for (const auto& [key, u] : uses)
    if (u.count == 1) bedges.push_back({u.from, u.to});
  std::sort(bedges.begin(), bedges.end(), [](const BEdge& x, const BEdge& y) {
    return std::pair(x.from, x.to) < std::pair(y.from, y.to);
  });
  std::map<int, std::vector<int>> incident;
  for (int i = 0; i < static_cast<int>(bedges.size()); ++i) {
    incident[bedges[i].from].push_back(i);
    incident[bedges[i].to].push_back(i);
  }

  std::vector<std::vector<int>> loops;
  for (int start = 0; start < static_cast<int>(bedges.size()); ++start) {
    if (bedges[start].used) continue;
    std::vector<int> loop;
    bedges[start].used = true;
    const int origin = bedges[start].from;
    loop.push_back(origin);
    int cur = bedges[start].to;
    while (cur != origin) {
      loop.push_back(cur);
      int next = -1;
      // Prefer the edge leaving `cur` along face orientation.
      for (int id : incident[cur])
        if (!bedges[id].used && bedges[id].from == cur) { next = id; break; }
      if (next < 0)
        for (int id : incident[cur])
          if (!bedges[id].used) { next = id; break; }
      if (next < 0) fail(ErrorKind::NonManifold, "boundary walk does not close");
      bedges[next].used = true;
      cur = bedges[next].from == cur ? bedges[next].to : bedges[next].from;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

std::vector<IntegralCurve> boundary_of(const TriSurface& s) {
  std::vector<IntegralCurve> out;
  for (const auto& loop : boundary_loops(s)) {
    std::vector<Point3> pts;
    pts.reserve(loop.size());
    for (int v : loop) pts.push_back(s.vertices[v]);
    out.push_back(IntegralCurve::rounded(std::move(pts)));
  }
  return out;
}

TriSurface glue(const TriSurface& s1, const TriSurface& s2,
                const std::vector<std::pair<int, int>>& correspondence, const Tolerance& tol,
                bool merge_coincident) {
  std::vector<int> remap(s2.vertices.size(), -1);
  double worst = 0.0;
  for (auto [i2, i1] : correspondence) {
    if (i2 < 0 || i1 < 0 || i2 >= static_cast<int>(s2.vertices.size()) ||
        i1 >= static_cast<int>(s1.vertices.size()))
      fail(ErrorKind::Glue, "correspondence index out of range");
    worst = std::max(worst, (s1.vertices[i1] - s2.vertices[i2]).norm());
    remap[i2] = i1;
  }
  if (worst > tol.geom_tol) {
    std::ostringstream os;
    os << "glued vertices do not coincide (max deviation " << worst << ")";
    fail(ErrorKind::Glue, os.str());
  }
  TriSurface out;
  out.unit_flag = s1.unit_flag && s2.unit_flag;
  out.vertices = s1.vertices;
  out.faces = s1.faces;
  std::optional<PointIndex> index;
  if (merge_coincident) {
    index.emplace(tol.geom_tol);
    for (int i = 0; i < static_cast<int>(s1.vertices.size()); ++i) index->insert(s1.vertices[i], i);
  }
  for (int i = 0; i < static_cast<int>(s2.vertices.size()); ++i) {
    if (remap[i] >= 0) continue;
    if (index) remap[i] = index->find(s2.vertices[i]);
    if (remap[i] < 0) remap[i] = out.add_vertex(s2.vertices[i]);
  }
  out.faces.reserve(s1.faces.size() + s2.faces.size());
  for (const Face& f : s2.faces) {
    const Face g{remap[f[0]], remap[f[1]], remap[f[2]]};
    if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2])
      fail(ErrorKind::Glue, "gluing collapses a face");
    out.faces.push_back(g);
  }
  return out;
}

std::vector<int> merge_into(TriSurface& dst, const TriSurface& part, std::vector<int> fixed) {
  fixed.resize(part.vertices.size(), -1);
  for (std::size_t i = 0; i < part.vertices.size(); ++i) {
    if (fixed[i] >= static_cast<int>(dst.vertices.size()))
      fail(ErrorKind::Glue, "identified vertex index out of range");
    if (fixed[i] < 0) fixed[i] = dst.add_vertex(part.vertices[i]);
  }
  for (const Face& f : part.faces) dst.faces.push_back({fixed[f[0]], fixed[f[1]], fixed[f[2]]});
  return fixed;
}

TriSurface glue_coincident(const TriSurface& s1, const TriSurface& s2, const Tolerance& tol) {
  return glue(s1, s2, {}, tol, true);
}

TriSurface refine_by_factor(const TriSurface& s, int r, const Tolerance& tol) {
  if (r < 1) fail(ErrorKind::Refine, "refinement factor must be a positive integer");
  for (auto [a, b] : edges_of(s)) {
    const double len = (s.vertices[a] - s.vertices[b]).norm();
    if (std::abs(len - r) > tol.geom_tol * r) {
      std::ostringstream os;
      os << "edge (" << a << "," << b << ") has length " << len << ", expected " << r;
      fail(ErrorKind::Refine, os.str());
    }
  }
  TriSurface out;
  out.unit_flag = true;
  out.vertices = s.vertices;
  if (r == 1) {
    out.faces = s.faces;
    return out;
  }
  // Points on an edge are shared between the two faces that use it.
  std::unordered_map<std::uint64_t, std::vector<int>> edge_points;
  auto edge_point = [&](int a, int b, int step) {
    // step-th point from a towards b, 0 < step < r
    const bool flipped = a > b;
    const int lo = flipped ? b : a, hi = flipped ? a : b;
    auto& pts = edge_points[edge_key(lo, hi)];
    if (pts.empty()) {
      pts.resize(r - 1);
      for (int t = 1; t < r; ++t)
        pts[t - 1] = out.add_vertex(s.vertices[lo] + (s.vertices[hi] - s.vertices[lo]) * (double(t) / r));
    }
    return pts[(flipped ? r - step : step) - 1];
  };
  for (const Face& f : s.faces) {
    const Point3 &A = s.vertices[f[0]], &B = s.vertices[f[1]], &C = s.vertices[f[2]];
    // grid index (i, j): A + i/r (B - A) + j/r (C - A)
    std::vector<int> grid((r + 1) * (r + 1), -1);
    auto at = [&](int i, int j) -> int& { return grid[i * (r + 1) + j]; };
    for (int i = 0; i <= r; ++i)
      for (int j = 0; i + j <= r; ++j) {
        int id;
        if (i == 0 && j == 0) id = f[0];
        else if (i == r) id = f[1];
        else if (j == r) id = f[2];
        else if (j == 0) id = edge_point(f[0], f[1], i);
        else if (i == 0) id = edge_point(f[0], f[2], j);
        else if (i + j == r) id = edge_point(f[1], f[2], j);
        else id = out.add_vertex(A + (B - A) * (double(i) / r) + (C - A) * (double(j) / r));
        at(i, j) = id;
      }
    for (int i = 0; i < r; ++i)
      for (int j = 0; i + j < r; ++j) {
        out.faces.push_back({at(i, j), at(i + 1, j), at(i, j + 1)});
        if (i + j + 1 < r) out.faces.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
      }
  }
  return out;
}

IntegralCurve subdivide_unit(const IntegralCurve& c) {
  std::vector<Point3> pts;
  const std::size_t n = c.size();
  if (c.lengths.size() != n) fail(ErrorKind::Malformed, "one declared length per edge is required");
  for (std::size_t i = 0; i < n; ++i) {
    const int k = c.lengths[i];
    if (k <= 0) fail(ErrorKind::Malformed, "declared lengths must be positive integers");
    for (int t = 0; t < k; ++t) pts.push_back(c[i] + (c[i + 1] - c[i]) * (double(t) / k));
  }
  return IntegralCurve::unit(std::move(pts));
}

RigidMotion best_fit_motion(std::span<const Point3> from, std::span<const Point3> to) {
  if (from.size() != to.size() || from.empty())
    fail(ErrorKind::Dimension, "alignment needs equally many points");
  Point3 cf = Point3::Zero(), ct = Point3::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) {
    cf += from[i];
    ct += to[i];
  }
  cf /= double(from.size());
  ct /= double(to.size());
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) h += (from[i] - cf) * (to[i] - ct).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0) d(2, 2) = -1.0;
  RigidMotion m;
  m.rotation = svd.matrixV() * d * svd.matrixU().transpose();
  m.translation = ct - m.rotation * cf;
  return m;
}

TriSurface transformed(const TriSurface& s, const RigidMotion& m) {
  TriSurface out = s;
  for (auto& v : out.vertices) v = m.apply(v);
  return out;
}

DomeVerdict verify_dome(const TriSurface& s, const IntegralCurve& c, const Tolerance& tol,
                        bool align_rigid) {
  DomeVerdict v;
  if (s.faces.empty()) {
    v.reasons.push_back("surface has no faces");
    return v;
  }
  v.max_edge_deviation = max_unit_edge_deviation(s);
  v.edges_unit = v.max_edge_deviation <= tol.geom_tol;
  if (!v.edges_unit) {
    std::ostringstream os;
    os << "non-unit edge (max deviation " << v.max_edge_deviation << ")";
    v.reasons.push_back(os.str());
  }

  std::vector<std::vector<int>> loops;
  try {
    loops = boundary_loops(s);
  } catch (const Error& e) {
    v.reasons.push_back(e.what());
    return v;
  }
  if (loops.size() != 1) {
    v.reasons.push_back("expected exactly one boundary loop, found " + std::to_string(loops.size()));
    return v;
  }
  const IntegralCurve target = subdivide_unit(c);
  const auto& loop = loops.front();
  const std::size_t n = target.size();
  if (loop.size() != n) {
    v.reasons.push_back("boundary has " + std::to_string(loop.size()) + " vertices, curve has " +
                        std::to_string(n));
    v.boundary_deviation = std::numeric_limits<double>::infinity();
    return v;
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<Point3> walk(n);
  for (int dir : {1, -1})
    for (std::size_t shift = 0; shift < n; ++shift) {
      for (std::size_t i = 0; i < n; ++i) {
        const long idx = (long(shift) + dir * long(i)) % long(n);
        walk[i] = s.vertices[loop[(idx + n) % n]];
      }
      if (align_rigid) {
        const RigidMotion m = best_fit_motion(walk, target.vertices);
        for (auto& p : walk) p = m.apply(p);
      }
      best = std::min(best, frechet_distance(walk, target.vertices));
    }
  v.boundary_deviation = best;
  v.boundary_match = best <= tol.geom_tol;
  if (!v.boundary_match) {
    std::ostringstream os;
    os << "boundary does not match curve (deviation " << best << ")";
    v.reasons.push_back(os.str());
  }
  v.pass = v.edges_unit && v.boundary_match;
  return v;
}

SpernerResult sperner_parity(const TriSurface& s, std::span<const int> coloring) {
  if (coloring.size() != s.vertices.size())
    fail(ErrorKind::Precondition, "coloring must assign a color to every vertex");
  for (int c : coloring)
    if (c < 1 || c > 3) fail(ErrorKind::Precondition, "colors must be 1, 2 or 3");
  if (!boundary_loops(s).empty()) fail(ErrorKind::Precondition, "surface is not closed");
  SpernerResult r;
  for (const Face& f : s.faces) {
    const int mask = (1 << coloring[f[0]]) | (1 << coloring[f[1]]) | (1 << coloring[f[2]]);
    if (mask == 0b1110) ++r.rainbow;
  }
  r.even = r.rainbow % 2 == 0;
  return r;
}

Point3 rotate_about_axis(const Point3& p, const Point3& a, const Point3& b, double angle) {
  const Point3 axis = (b - a).normalized();
  return a + Eigen::AngleAxisd(angle, axis) * (p - a);
}

}  // namespace domes
