#include "domes/rhombus.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <cstdlib>
#include <sstream>

namespace domes {

namespace {

const double kSqrt3 = std::sqrt(3.0);

bool unit_within(const Point3& a, const Point3& b, double tol) {
  return std::abs((a - b).norm() - 1.0) <= tol;
}

}  // namespace

void RhombusSpec::check(const Tolerance& tol) const {
  if (!(a >= 0.0) || !(b >= 0.0)) fail(ErrorKind::Domain, "rhombus diagonals must be non-negative");
  if (a * a + b * b > 4.0 + tol.geom_tol)
    fail(ErrorKind::Domain, "rhombus diagonals violate a^2 + b^2 <= 4");
}

std::vector<Point3> RhombusSpec::vertices() const {
  check();
  const double r2 = std::max(0.0, 1.0 - a * a / 4.0);
  const double h = std::sqrt(std::max(0.0, r2 - b * b / 4.0));
  return {Point3(-a / 2, 0, 0), Point3(0, b / 2, -h), Point3(a / 2, 0, 0), Point3(0, -b / 2, -h)};
}

FlipPlan FlipPlan::inverse() const {
  FlipPlan inv;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) inv.steps.push_back({it->k, -it->m});
  return inv;
}

long long FlipPlan::face_count() const {
  long long n = 0;
  for (const auto& s : steps) n += 2LL * std::llabs(s.m);
  return n;
}

double fan_angle(double a) {
  if (!(a > 0.0)) fail(ErrorKind::Domain, "fan axis length must be positive");
  if (a > kSqrt3 + 1e-12) {
    std::ostringstream os;
    os << "fan axis length " << a << " is not below sqrt(3)";
    fail(ErrorKind::Domain, os.str());
  }
  const double arg = 1.0 / std::sqrt(4.0 - a * a);
  return std::asin(std::min(1.0, arg));
}

double chord_length(double a, int m) {
  const double alpha = fan_angle(a);
  if (m == 1) return 1.0;
  return std::sqrt(4.0 - a * a) * std::abs(std::sin(m * alpha));
}

Point3 fan_apex(const Point3& v, const Point3& w, const Point3& start, int m) {
  const double alpha = fan_angle((w - v).norm());
  return rotate_about_axis(start, v, w, 2.0 * m * alpha);
}

TriSurface fan_dome(const Point3& v, const Point3& w, const Point3& start, int m, int orientation,
                    const Tolerance& tol) {
  if (m < 0) {
    m = -m;
    orientation = -orientation;
  }
  if (orientation != 1 && orientation != -1)
    fail(ErrorKind::Precondition, "fan orientation must be +1 or -1");
  const double a = (w - v).norm();
  const double alpha = fan_angle(a);
  if (!unit_within(v, start, tol.geom_tol) || !unit_within(w, start, tol.geom_tol))
    fail(ErrorKind::Precondition, "fan start must be at unit distance from both axis ends");
  TriSurface s;
  const int iv = s.add_vertex(v);
  const int iw = s.add_vertex(w);
  for (int i = 0; i <= m; ++i)
    s.add_vertex(i == 0 ? start : rotate_about_axis(start, v, w, 2.0 * i * orientation * alpha));
  for (int i = 0; i < m; ++i) {
    s.add_face(iv, 2 + i, 3 + i);
    s.add_face(iw, 3 + i, 2 + i);
  }
  return s;
}

namespace {

// Index of the flipped vertex after checking the step can be applied.
int checked_flip_vertex(const IntegralCurve& c, const FlipStep& step, const Tolerance& tol) {
  const int n = static_cast<int>(c.size());
  if (n < 3) fail(ErrorKind::Malformed, "a curve needs at least 3 vertices");
  if (step.k < 1 || step.k > n) fail(ErrorKind::Flip, "flip index out of range");
  const int k = step.k - 1;
  const int prev = (k + n - 1) % n, next = (k + 1) % n;
  if (c.lengths[prev] != 1 || c.lengths[k] != 1 || !unit_within(c[prev], c[k], tol.geom_tol) ||
      !unit_within(c[k], c[next], tol.geom_tol))
    fail(ErrorKind::Precondition, "edges at the flipped vertex must be unit");
  const double axis = (c[next] - c[prev]).norm();
  if (!(axis > tol.geom_tol) || axis >= kSqrt3) {
    std::ostringstream os;
    os << "flip axis at vertex " << step.k << " has length " << axis << ", outside (0, sqrt 3)";
    fail(ErrorKind::Flip, os.str());
  }
  return k;
}

}  // namespace

FlipResult flip_apply(const IntegralCurve& c, const FlipStep& step, const Tolerance& tol) {
  FlipResult out{c, {}};
  if (step.m == 0) {
    if (step.k < 1 || step.k > static_cast<int>(c.size())) fail(ErrorKind::Flip, "flip index out of range");
    return out;
  }
  const int k = checked_flip_vertex(c, step, tol);
  const int n = static_cast<int>(c.size());
  out.patch = fan_dome(c[(k + n - 1) % n], c[(k + 1) % n], c[k], step.m, 1, tol);
  out.curve.vertices[k] = out.patch.vertices.back();
  return out;
}

IntegralCurve flip_curve(const IntegralCurve& c, const FlipStep& step, const Tolerance& tol) {
  IntegralCurve out = c;
  if (step.m == 0) return out;
  const int k = checked_flip_vertex(c, step, tol);
  // Same arithmetic as the last apex of fan_dome.
  const int n = static_cast<int>(c.size());
  const Point3 &v = c[(k + n - 1) % n], &w = c[(k + 1) % n];
  const int m = std::abs(step.m), orientation = step.m < 0 ? -1 : 1;
  out.vertices[k] = rotate_about_axis(c[k], v, w, 2.0 * m * orientation * fan_angle((w - v).norm()));
  return out;
}

PlanResult apply_plan(const IntegralCurve& c, const FlipPlan& plan, const Tolerance& tol) {
  PlanResult r;
  r.curve = c;
  const int n = static_cast<int>(c.size());
  r.start_index.assign(n, -1);
  r.end_index.assign(n, -1);
  auto index_of = [&](int i) {
    if (r.end_index[i] < 0) {
      r.end_index[i] = r.surface.add_vertex(r.curve.vertices[i]);
      if (r.start_index[i] < 0) r.start_index[i] = r.end_index[i];
    }
    return r.end_index[i];
  };
  for (std::size_t s = 0; s < plan.steps.size(); ++s) {
    const FlipStep& step = plan.steps[s];
    FlipResult f;
    try {
      f = flip_apply(r.curve, step, tol);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "plan step " << s << " (k=" << step.k << ", m=" << step.m << "): " << e.what();
      throw Error(e.kind(), os.str());
    }
    if (step.m == 0) continue;
    const int k = step.k - 1;
    const int prev = (k + n - 1) % n, next = (k + 1) % n;
    // patch layout: v, w, p_0 .. p_m
    std::vector<int> map(f.patch.vertices.size());
    map[0] = index_of(prev);
    map[1] = index_of(next);
    map[2] = index_of(k);
    for (std::size_t i = 3; i < f.patch.vertices.size(); ++i)
      map[i] = r.surface.add_vertex(f.patch.vertices[i]);
    for (const Face& face : f.patch.faces) r.surface.faces.push_back({map[face[0]], map[face[1]], map[face[2]]});
    r.end_index[k] = map.back();
    r.curve = std::move(f.curve);
  }
  return r;
}

MultiplierChoice find_multiplier(double a, double target, int max_m, double good_enough) {
  if (max_m < 1) fail(ErrorKind::Precondition, "multiplier limit must be at least 1");
  const double alpha = fan_angle(a);
  const double scale = std::sqrt(4.0 - a * a);
  MultiplierChoice best;
  best.error = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= max_m; ++m) {
    const double s = std::sin(m * alpha);
    if (std::abs(s) < 1e-12) best.periodic = true;
    const double chord = m == 1 ? 1.0 : scale * std::abs(s);
    const double err = std::abs(chord - target);
    if (err < best.error) {
      best.m = m;
      best.chord = chord;
      best.error = err;
      if (err <= good_enough) break;
    }
  }
  return best;
}

FanChoice fan_towards(const Point3& v, const Point3& w, const Point3& start, const Point3& target,
                      int max_m, double good_enough) {
  const double a = (w - v).norm();
  const double alpha = fan_angle(a);
  const Point3 d = (w - v) / a;
  const Point3 centre = 0.5 * (v + w);
  const Point3 x = start - centre;
  const double r = x.norm();
  if (!(r > 0.0)) fail(ErrorKind::Precondition, "fan start lies on its axis");
  const Point3 y = d.cross(x);
  const Point3 t = target - centre;
  const double goal = std::atan2(t.dot(y), t.dot(x));
  int best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  const double stop = good_enough <= 0.0 ? 0.0 : 2.0 * std::asin(std::min(1.0, good_enough / (2.0 * r)));
  for (int m = 1; m <= max_m && best_gap > stop; ++m)
    for (int s : {1, -1}) {
      const double gap = std::abs(std::remainder(2.0 * s * m * alpha - goal, 2.0 * std::numbers::pi));
      if (gap < best_gap) {
        best_gap = gap;
        best = s * m;
        if (gap <= stop) break;
      }
    }
  FanChoice out;
  out.m = best;
  out.apex = best == 0 ? start : rotate_about_axis(start, v, w, 2.0 * best * alpha);
  out.error = (out.apex - target).norm();
  return out;
}

}  // namespace domes
