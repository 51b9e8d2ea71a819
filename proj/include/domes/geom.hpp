#pragma once

// Curves, triangulated surfaces and the predicates every construction is
// checked against.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "domes/error.hpp"

namespace domes {

using Point3 = Eigen::Vector3d;

struct Tolerance {
  double geom_tol = 1e-9;  // edge-length and coincidence checks
  double rank_tol = 1e-8;  // relative singular-value cutoff

  void check() const;
};

/// Spatial hash for finding points within `tol` of a query.
class PointIndex {
 public:
  explicit PointIndex(double tol) : cell_(std::max(tol * 4.0, 1e-7)), tol_(tol) {}

  void insert(const Point3& p, int id) { cells_[key(cell_of(p))].push_back({p, id}); }

  int find(const Point3& p) const {
    const auto c = cell_of(p);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          auto it = cells_.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
          if (it == cells_.end()) continue;
          for (const auto& [q, id] : it->second)
            if ((q - p).norm() <= tol_) return id;
        }
    return -1;
  }

 private:
  using Cell = std::array<long long, 3>;
  Cell cell_of(const Point3& p) const {
    return {static_cast<long long>(std::floor(p.x() / cell_)),
            static_cast<long long>(std::floor(p.y() / cell_)),
            static_cast<long long>(std::floor(p.z() / cell_))};
  }
  static std::uint64_t key(const Cell& c) {
    std::uint64_t h = 1469598103934665603ull;
    for (long long v : c) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }

  double cell_;
  double tol_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<Point3, int>>> cells_;
};

/// Closed polygonal curve; edge i joins vertices[i] and vertices[i+1 mod n].
struct IntegralCurve {
  std::vector<Point3> vertices;
  std::vector<int> lengths;

  std::size_t size() const { return vertices.size(); }
  const Point3& operator[](std::size_t i) const { return vertices[i % vertices.size()]; }

  /// Curve whose declared lengths are all 1.
  static IntegralCurve unit(std::vector<Point3> vertices);
  /// Declared lengths inferred by rounding the measured distances.
  static IntegralCurve rounded(std::vector<Point3> vertices);

  int total_length() const;
};

using Face = std::array<int, 3>;

struct TriSurface {
  std::vector<Point3> vertices;
  std::vector<Face> faces;
  bool unit_flag = true;

  int add_vertex(const Point3& p) {
    vertices.push_back(p);
    return static_cast<int>(vertices.size()) - 1;
  }
  /// Rejects repeated indices and collinear corners.
  void add_face(int a, int b, int c);

  bool empty() const { return faces.empty(); }
};

struct CurveReport {
  bool pass = true;
  std::vector<double> deviations;  // |measured - declared| per edge
  int first_failing_edge = -1;
};

CurveReport validate_curve(const IntegralCurve& c, const Tolerance& tol = {});

double frechet_distance(std::span<const Point3> a, std::span<const Point3> b);
double frechet_distance(const IntegralCurve& a, const IntegralCurve& b);

/// Closed boundary walks as vertex index loops, following face orientation
/// where it is consistent. Empty for closed surfaces.
std::vector<std::vector<int>> boundary_loops(const TriSurface& s);
std::vector<IntegralCurve> boundary_of(const TriSurface& s);

/// Union of two surfaces. `correspondence` lists (index in s2, index in s1)
/// pairs to identify; the points must coincide within geom_tol. When
/// `merge_coincident` is set, any other vertex of s2 lying within geom_tol of
/// a vertex of s1 is identified as well.
TriSurface glue(const TriSurface& s1, const TriSurface& s2,
                const std::vector<std::pair<int, int>>& correspondence,
                const Tolerance& tol = {}, bool merge_coincident = false);

/// Appends `part` to `dst`. Part vertex i is identified with dst vertex
/// fixed[i] when that entry exists and is >= 0; other vertices are copied.
/// Returns the dst index of every part vertex.
std::vector<int> merge_into(TriSurface& dst, const TriSurface& part, std::vector<int> fixed);

/// Identifies every pair of coincident vertices between the two surfaces.
TriSurface glue_coincident(const TriSurface& s1, const TriSurface& s2,
                           const Tolerance& tol = {});

/// Splits every face (edge length r) into r^2 triangles of edge 1.
TriSurface refine_by_factor(const TriSurface& s, int r, const Tolerance& tol = {});

struct DomeVerdict {
  bool pass = false;
  bool edges_unit = false;
  bool boundary_match = false;
  double max_edge_deviation = 0.0;
  double boundary_deviation = 0.0;
  std::vector<std::string> reasons;
};

/// Checks that every edge is unit and that the single boundary loop matches
/// `c` (after unit subdivision) up to cyclic shift and reversal. With
/// `align_rigid` the comparison is made after best-fit rigid alignment.
DomeVerdict verify_dome(const TriSurface& s, const IntegralCurve& c,
                        const Tolerance& tol = {}, bool align_rigid = false);

struct SpernerResult {
  int rainbow = 0;
  bool even = true;
};

/// `coloring[i]` in {1,2,3} for every vertex i of a closed surface.
SpernerResult sperner_parity(const TriSurface& s, std::span<const int> coloring);

// Helpers shared across modules.

/// Rotates p about the oriented axis a->b by `angle` (right-hand rule).
Point3 rotate_about_axis(const Point3& p, const Point3& a, const Point3& b, double angle);

/// Replaces every edge of length k by k collinear unit steps.
IntegralCurve subdivide_unit(const IntegralCurve& c);

/// Unique undirected edges of the surface.
std::vector<std::pair<int, int>> edges_of(const TriSurface& s);

double max_unit_edge_deviation(const TriSurface& s);

/// Reorders face corners so neighbouring faces induce opposite directions on
/// shared edges. Returns false when the surface is not orientable.
bool orient_consistently(TriSurface& s);

/// Rigid transform (R, t) minimising sum |R a_i + t - b_i|^2 (Kabsch).
struct RigidMotion {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Point3 translation = Point3::Zero();
  Point3 apply(const Point3& p) const { return rotation * p + translation; }
};
RigidMotion best_fit_motion(std::span<const Point3> from, std::span<const Point3> to);

TriSurface transformed(const TriSurface& s, const RigidMotion& m);

}  // namespace domes
