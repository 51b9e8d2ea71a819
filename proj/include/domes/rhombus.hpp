#pragma once

// Unit rhombus fans and vertex flips.

#include <vector>

#include "domes/geom.hpp"

namespace domes {

/// Skew unit rhombus with diagonals a and b.
struct RhombusSpec {
  double a = 0.0;
  double b = 0.0;

  void check(const Tolerance& tol = {}) const;
  /// Vertices [v p w q]: v, w at (-a/2,0,0), (a/2,0,0); p, q symmetric about the x axis below it.
  std::vector<Point3> vertices() const;
};

struct FlipStep {
  int k = 1;  // 1-based vertex index
  int m = 0;  // signed multiplier; positive turns right-handed about v_{k-1} -> v_{k+1}
  bool operator==(const FlipStep&) const = default;
};

struct FlipPlan {
  std::vector<FlipStep> steps;

  bool empty() const { return steps.empty(); }
  /// Reversed order with negated multipliers.
  FlipPlan inverse() const;
  /// Total number of fan triangles the plan produces.
  long long face_count() const;
};

/// Half the angular step between consecutive fan apexes around an axis of length a.
double fan_angle(double a);

/// Distance between the first apex and the m-th one.
double chord_length(double a, int m);

/// Fan of 2|m| unit triangles around the axis v-w, starting at `start`.
/// Vertex order: v, w, p_0 .. p_m. The boundary loop is v, p_0, w, p_m.
/// `orientation` (+1/-1) picks the turning direction.
TriSurface fan_dome(const Point3& v, const Point3& w, const Point3& start, int m,
                    int orientation = 1, const Tolerance& tol = {});

/// Apex position after turning `start` by multiplier m about v -> w.
Point3 fan_apex(const Point3& v, const Point3& w, const Point3& start, int m);

struct FlipResult {
  IntegralCurve curve;
  TriSurface patch;
};

FlipResult flip_apply(const IntegralCurve& c, const FlipStep& step, const Tolerance& tol = {});

/// The curve of flip_apply without building the patch.
IntegralCurve flip_curve(const IntegralCurve& c, const FlipStep& step, const Tolerance& tol = {});

struct PlanResult {
  IntegralCurve curve;
  TriSurface surface;
  /// Surface index of each curve vertex in its original position (-1 if never touched).
  std::vector<int> start_index;
  /// Surface index of each curve vertex in its final position (-1 if never touched).
  std::vector<int> end_index;
};

/// Folds flip_apply over the plan. Patches share vertices by curve identity,
/// never by geometric coincidence.
PlanResult apply_plan(const IntegralCurve& c, const FlipPlan& plan, const Tolerance& tol = {});

struct MultiplierChoice {
  int m = 0;
  double chord = 0.0;
  double error = 0.0;
  /// Some multiplier up to the scan limit returns (numerically) to the start.
  bool periodic = false;
};

/// Scans m = 1..max_m for the chord closest to `target`. Stops early once
/// the error drops below `good_enough`.
MultiplierChoice find_multiplier(double a, double target, int max_m = 100000,
                                 double good_enough = 0.0);

struct FanChoice {
  int m = 0;            // signed multiplier, never 0
  Point3 apex;          // p_m
  double error = 0.0;   // |apex - target|
};

/// Signed multiplier, 1 <= |m| <= max_m, whose apex lands nearest to `target`.
/// The smallest |m| whose apex is within `good_enough` of target's
/// projection onto the apex circle is taken when one exists.
FanChoice fan_towards(const Point3& v, const Point3& w, const Point3& start, const Point3& target,
                      int max_m, double good_enough);

}  // namespace domes
