#pragma once

// Nearby domable curves: given an integral curve and a tolerance, build an
// equal-length integral curve within that tolerance together with a dome.

#include <cstdint>
#include <string>
#include <vector>

#include "domes/flatten_pack.hpp"
#include "domes/geom.hpp"
#include "domes/rhombus.hpp"

namespace domes {

struct ApproxOptions {
  std::uint64_t seed = 1;
  int max_multiplier = 100000;
  int max_attempts = 4;           // fan accuracy is tightened between attempts
  long long max_faces = 20000000;
  double feasibility_margin = 0.02;
};

/// One closing step of the recursion (cap over a pentagon).
struct CapLog {
  int curve_size = 0;       // size of the curve being closed at this level
  Point3 apex;              // auxiliary vertex shared with the deeper level
  std::vector<int> multipliers;
  std::vector<double> errors;
};

struct ApproxLog {
  std::string route;        // "triangle", "direct", "flips" or "packing"
  int start = 0;            // curve index used as the recursion base
  int direction = 1;        // +1 keeps the curve order, -1 reverses it
  std::uint64_t seed = 0;
  int attempts = 0;
  double fan_tolerance = 0.0;
  double perturbation = 0.0;
  FlipPlan pre_plan;        // flips towards a feasible curve
  FlipPlan pullback;        // flips actually used to return from it
  std::vector<CapLog> caps;
  double continuation_gap = 0.0;  // shared vertices are placed exactly
};

struct ApproxResult {
  IntegralCurve curve_out;
  TriSurface dome;
  double frechet = 0.0;
  ApproxLog log;
};

/// Base case on a generic pentagon with unit edges. Only the second and fifth
/// vertices move.
ApproxResult dome_pentagon(const IntegralCurve& c, double eps, const ApproxOptions& opt = {});

/// Full construction for any integral curve.
ApproxResult dome_curve(const IntegralCurve& c, double eps, const ApproxOptions& opt = {});

/// Smallest slack of the conditions the recursion needs when `w[0]` is the
/// base vertex (negative when infeasible).
double recursion_margin(const std::vector<Point3>& w);

}  // namespace domes
