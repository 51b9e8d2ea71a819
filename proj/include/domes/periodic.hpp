#pragma once

// Doubly periodic surfaces, flexible octahedra and numerical flex counting.

#include <array>
#include <optional>
#include <vector>

#include "domes/geom.hpp"

namespace domes {

/// Vertex of the periodic surface: orbit representative shifted by p alpha + q beta.
struct LatticeRef {
  int vertex = 0;
  int p = 0, q = 0;
  friend bool operator==(const LatticeRef&, const LatticeRef&) = default;
};

using PeriodicFace = std::array<LatticeRef, 3>;

struct PeriodicSurface {
  std::vector<Point3> orbit_vertices;
  std::vector<PeriodicFace> faces;
  Point3 alpha = Point3::Zero();
  Point3 beta = Point3::Zero();
  bool unit_flag = true;

  Point3 position(const LatticeRef& r) const {
    return orbit_vertices[r.vertex] + r.p * alpha + r.q * beta;
  }
  /// Free action, non-degenerate faces, independent periods.
  void validate(const Tolerance& tol = {}) const;
};

struct GramMatrix {
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;

  double determinant() const { return g11 * g22 - g12 * g12; }
  /// The periods are (numerically) dependent.
  bool degenerate(double tol = 1e-9) const;
};

GramMatrix gram_of(const PeriodicSurface& p);

/// Builds the periodic surface from a finite list of triangles whose vertices
/// may lie in several translates of the fundamental domain.
PeriodicSurface quotient_of(const std::vector<Point3>& points, const std::vector<Face>& faces,
                            const Point3& alpha, const Point3& beta, const Tolerance& tol = {});

/// Chessboard surface: translates of the dome on white cells, of its point
/// reflection on black cells. The periods are the two diagonals of the boundary.
PeriodicSurface periodic_from_dome(const TriSurface& dome, const Tolerance& tol = {});

/// The k x k block of translates p, q in [0, k).
TriSurface materialize_patch(const PeriodicSurface& p, int k);

/// Same surface described with periods (a alpha + b beta, c alpha + d beta); ad - bc = +-1.
PeriodicSurface change_basis(const PeriodicSurface& p, int a, int b, int c, int d);

/// Unique edges as pairs of lattice references, the first one at offset (0, 0).
std::vector<std::pair<LatticeRef, LatticeRef>> edge_orbits(const PeriodicSurface& p);

// ---------------------------------------------------------------------------
// Flexible octahedra

/// Line-symmetric octahedron. The half-turn about the z axis swaps a1/a2,
/// b1/b2, c1/c2. The reference configuration fixes the six edge lengths; the
/// flex parameter is the diagonal |b1 b2|.
struct BricardParams {
  double diagonal_b = 2.0;     // |b1 b2|
  double diagonal_c = 1.7;     // |c1 c2|
  double twist = 1.1;          // angle between the two diagonals
  double lift = 0.8;           // height of c1, c2 above the b diagonal
  Point3 a1{0.35, 1.25, 1.6};

  void check() const;
};

struct BricardOctahedron {
  /// Vertex order a1 a2 b1 b2 c1 c2.
  TriSurface surface;
  /// |b1 c1|, |c1 b2|, |a1 b1|, |a1 b2|, |a1 c1|, |a1 c2|.
  std::array<double, 6> lengths{};
};

/// Octahedron of the family at flex parameter t (|b1 b2| = t).
BricardOctahedron bricard_octahedron(const BricardParams& params, double t);

/// Index triples of the eight faces, with the vertex order of bricard_octahedron.
std::array<Face, 8> octahedron_faces();

// ---------------------------------------------------------------------------
// Accordion

/// Octahedron with a pyramid on two of its faces; f1 and f2 are the pyramid bases.
struct FlexibleBlock {
  TriSurface surface;  // triangles only; the two bases are left open
  std::array<int, 4> f1{}, f2{};
  double axis_length() const;
  Point3 centre(const std::array<int, 4>& f) const;
};

struct AccordionConfig {
  BricardParams block;         // octahedron inside every block
  BricardParams connector;     // octahedron joining the two chains
  double t_first = 1.87;       // flex parameter of the chain along alpha
  double t_second = 1.96;      // flex parameter of the chain along beta
  double t_connector = 2.03;
  /// Octahedron faces (indices into octahedron_faces()) that carry the pyramids;
  /// face 0 is reserved for the connector.
  int pyramid_face_1 = 7;
  int pyramid_face_2 = 5;
  bool with_connector = true;
};

struct AccordionResult {
  PeriodicSurface surface;
  FlexibleBlock block;
  /// d(axis length)/dt of the block, by central differences.
  double axis_rate = 0.0;
  /// Angle between the two chains.
  double sigma = 0.0;
};

FlexibleBlock flexible_block(const BricardParams& params, double t, int face_1, int face_2);
AccordionResult build_accordion(const AccordionConfig& cfg = {});

// ---------------------------------------------------------------------------
// Rigidity

struct FlexReport {
  int infinitesimal_dim = 0;
  int kernel_dim = 0;
  int removed_modes = 0;
  std::vector<double> singular_values;  // descending
  /// Smallest kept singular value over largest discarded one (infinite if none discarded).
  double gap_ratio = 0.0;
  bool coplanar = false;
  std::optional<int> finite_flex_confirmed;
};

struct FlexOptions {
  /// Try to follow every flex direction with a predictor-corrector step.
  bool path_following = false;
  double step = 1e-3;
};

FlexReport flex_dimension(const TriSurface& s, const Tolerance& tol = {}, const FlexOptions& opt = {});
FlexReport periodic_flex_dimension(const PeriodicSurface& p, const Tolerance& tol = {},
                                   const FlexOptions& opt = {});

}  // namespace domes
