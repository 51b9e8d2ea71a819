#pragma once

// Domes over regular polygons and the isosceles triangle calculus.

#include <string>
#include <utility>
#include <vector>

#include "domes/geom.hpp"
#include "domes/rhombus.hpp"

namespace domes {

/// Regular n-gon with side r in the plane z = 0, centred at the origin.
/// Vertex j sits at angle (2j + 1) pi / n.
IntegralCurve regular_polygon(int n, int r = 1);

/// Explicit domes for n in {3, 4, 5, 6, 8, 10, 12} over regular_polygon(n).
TriSurface classical_dome(int n);

struct NgonPlan {
  int n = 0;
  int r = 1;
  double theta = 0.0;          // tilt of the boundary triangles after closure
  double theta0 = 0.0;         // tilt the multipliers were planned at
  std::vector<int> m_vector;   // ring multipliers, closing multiplier last
  std::vector<double> tilts;   // tilt of every layer, boundary triangles first
  std::vector<double> gaps;    // axis length of every fan layer
  double closure_residual = 0.0;
  int rings = 0;
  int replans = 0;

  void check() const;
};

struct NgonOptions {
  double theta0 = 0.2;
  /// Largest allowed tilt step between consecutive layers.
  double ring_window = 0.1;
  /// Largest allowed distance of the closing apex from the axis before root finding.
  double closing_window = 0.05;
  /// Closing multipliers tried in turn before the tilt is replanned.
  std::size_t closing_candidates = 6;
  int max_multiplier = 100000;
  int max_rings = 400;
  int max_replans = 8;
};

struct NgonResult {
  TriSurface surface;
  NgonPlan plan;
};

/// Dome over regular_polygon(n, r) for n >= 7 built from rings of rhombus fans.
NgonResult ngon_dome(int n, int r = 1, const Tolerance& tol = {}, const NgonOptions& opt = {});

// ---------------------------------------------------------------------------
// Triangle calculus

struct TriangleSpec {
  int a = 0, b = 0, c = 0;

  void check() const;
  bool isosceles_apex_first() const { return a == b; }
  std::string str() const;
  friend bool operator==(const TriangleSpec&, const TriangleSpec&) = default;
};

/// Triangle curve with sides a = |P0 P1|, b = |P1 P2|, c = |P2 P0| in the plane z = 0.
IntegralCurve triangle_curve(const TriangleSpec& t);

struct ReductionResult {
  /// Unit triangles attached to the (2,2,1) triangle.
  TriSurface surface;
  /// Vertices [M P N Y] of the remaining quadrilateral.
  std::vector<Point3> rhombus;
  RhombusSpec spec;
  /// Triangle corners: apex P, base Q and R.
  std::vector<Point3> triangle;
};

ReductionResult triangle_reduction(const TriangleSpec& t = {2, 2, 1});

/// Unit triangulation of the equilateral triangle with side k.
TriSurface equilateral_grid(int k);
/// Unit triangulation of the trapezoid with parallel sides l and l + 1.
TriSurface trapezoid_strip(int l);

struct ComposeStep {
  enum class Rule { Base, Planar, Trapezoid, Attach, Tetrahedron, Span };
  Rule rule = Rule::Base;
  TriangleSpec result;
  std::vector<TriangleSpec> inputs;
};

std::string rule_name(ComposeStep::Rule r);

/// Ordered construction steps that lead from the (2,2,1) base to the target.
std::vector<ComposeStep> compose_plan(const TriangleSpec& target);

struct ComposeOptions {
  /// Check every intermediate surface with verify_dome.
  bool verify = true;
  Tolerance tol;
};

struct ComposeResult {
  TriSurface surface;
  std::vector<ComposeStep> steps;
  /// Every intermediate passed verification.
  bool verified = false;
};

/// Assembles a dome over the target from a dome over the (2,2,1) triangle.
/// The base boundary must trace the (2,2,1) triangle at unit spacing.
ComposeResult triangle_compose(const TriSurface& base, const TriangleSpec& target,
                               const ComposeOptions& opt = {});

/// Non-unit stand-in for the (2,2,1) dome, for exercising the assembly only.
TriSurface mock_base_221();

}  // namespace domes
