#include "domes/dense_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace domes {

namespace {

const double kSqrt3 = std::sqrt(3.0);

double circumradius(const Point3& a, const Point3& b, const Point3& c) {
  const double area2 = (b - a).cross(c - a).norm();
  if (area2 <= 1e-300) return std::numeric_limits<double>::infinity();
  return (b - a).norm() * (c - b).norm() * (a - c).norm() / (2.0 * area2);
}

// The two points at unit distance from a, b and c; the first lies on the side
// of positive orientation of (a, b, c).
std::array<Point3, 2> unit_apexes(const Point3& a, const Point3& b, const Point3& c) {
  const Point3 u = b - a, v = c - a, w = u.cross(v);
  const double w2 = w.squaredNorm();
  const Point3 centre = a + (u.squaredNorm() * v.cross(w) + v.squaredNorm() * w.cross(u)) / (2.0 * w2);
  const double r2 = (centre - a).squaredNorm();
  if (r2 >= 1.0) fail(ErrorKind::Packing, "triangle cannot be covered by a unit circle");
  const Point3 lift = std::sqrt(1.0 - r2) * w.normalized();
  return {centre + lift, centre - lift};
}

// Nearest point to q on {x : |x - p| = |x - r| = 1}.
Point3 onto_unit_circle(const Point3& q, const Point3& p, const Point3& r) {
  const double d = (r - p).norm();
  const Point3 axis = (r - p) / d;
  const Point3 centre = 0.5 * (p + r);
  const double radius = std::sqrt(std::max(0.0, 1.0 - d * d / 4.0));
  Point3 t = q - centre;
  t -= t.dot(axis) * axis;
  if (t.norm() < 1e-300) t = axis.unitOrthogonal();
  return centre + radius * t.normalized();
}

struct Piece {
  TriSurface s;
  std::vector<int> idx;      // surface index of each boundary vertex, in curve order
  std::vector<Point3> pts;   // boundary positions
};

struct Context {
  const ApproxOptions& opt;
  double fan_tol;
  std::mt19937_64 rng;
  ApproxLog& log;
};

void check_faces(const Context& ctx, const TriSurface& s) {
  if (static_cast<long long>(s.faces.size()) > ctx.opt.max_faces)
    fail(ErrorKind::Approximation, "dome exceeds the face budget");
}

Piece triangle_piece(const std::vector<Point3>& w) {
  Piece p;
  for (const auto& x : w) p.idx.push_back(p.s.add_vertex(x));
  p.s.add_face(0, 1, 2);
  p.pts = w;
  return p;
}

Piece rhombus_piece(const std::vector<Point3>& w, Context& ctx) {
  if ((w[2] - w[0]).norm() >= kSqrt3) fail(ErrorKind::Packing, "rhombus diagonal is not below sqrt(3)");
  const FanChoice f = fan_towards(w[0], w[2], w[1], w[3], ctx.opt.max_multiplier, ctx.fan_tol);
  Piece p;
  p.s = fan_dome(w[0], w[2], w[1], f.m);
  const int last = static_cast<int>(p.s.vertices.size()) - 1;
  p.idx = {0, 2, 1, last};
  p.pts = {w[0], w[1], w[2], f.apex};
  ctx.log.caps.push_back({4, w[1], {f.m}, {f.error}});
  return p;
}

Piece pentagon_piece(const std::vector<Point3>& w, Context& ctx) {
  if (circumradius(w[0], w[2], w[3]) >= 1.0)
    fail(ErrorKind::Packing, "pentagon base triangle has circumradius at least 1");
  if ((w[2] - w[0]).norm() >= kSqrt3 || (w[3] - w[0]).norm() >= kSqrt3)
    fail(ErrorKind::Packing, "pentagon diagonal from the base vertex is not below sqrt(3)");
  const Point3 z = unit_apexes(w[0], w[2], w[3])[0];
  const FanChoice f1 = fan_towards(w[0], w[2], z, w[1], ctx.opt.max_multiplier, ctx.fan_tol);
  const FanChoice f2 = fan_towards(w[0], w[3], z, w[4], ctx.opt.max_multiplier, ctx.fan_tol);
  Piece p;
  const int i0 = p.s.add_vertex(w[0]), i2 = p.s.add_vertex(w[2]), i3 = p.s.add_vertex(w[3]);
  const int iz = p.s.add_vertex(z);
  const int ib = merge_into(p.s, fan_dome(w[0], w[2], z, f1.m), {i0, i2, iz}).back();
  const int ie = merge_into(p.s, fan_dome(w[0], w[3], z, f2.m), {i0, i3, iz}).back();
  p.s.add_face(i2, i3, iz);
  p.idx = {i0, ib, i2, i3, ie};
  p.pts = {w[0], f1.apex, w[2], w[3], f2.apex};
  ctx.log.caps.push_back({5, z, {f1.m, f2.m}, {f1.error, f2.error}});
  check_faces(ctx, p.s);
  return p;
}

Piece dome_rec(const std::vector<Point3>& w, Context& ctx) {
  const int n = static_cast<int>(w.size());
  if (n == 3) return triangle_piece(w);
  if (n == 4) return rhombus_piece(w, ctx);
  if (n == 5) return pentagon_piece(w, ctx);

  // Split off the pentagon [w0 w1 w2 w3 z] with |w0 z| = |w3 z| = 1.
  const double d = (w[3] - w[0]).norm();
  if (d >= kSqrt3) fail(ErrorKind::Packing, "diagonal from the base vertex is not below sqrt(3)");
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const Point3 axis = (w[3] - w[0]) / d;
  const Point3 centre = 0.5 * (w[0] + w[3]);
  const Point3 e1 = axis.unitOrthogonal(), e2 = axis.cross(e1);
  const double t = angle(ctx.rng);
  const Point3 z = centre + std::sqrt(1.0 - d * d / 4.0) * (std::cos(t) * e1 + std::sin(t) * e2);

  std::vector<Point3> rest{w[0], z};
  rest.insert(rest.end(), w.begin() + 3, w.end());
  Piece sub = dome_rec(rest, ctx);

  // Close [A B C D E]; A, D and E come from the deeper level and stay put.
  const Point3 A = sub.pts[0], E = sub.pts[1], D = sub.pts[2];
  const Point3 &B0 = w[1], &C0 = w[2];
  if (circumradius(A, D, C0) >= 1.0)
    fail(ErrorKind::Packing, "cap triangle has circumradius at least 1");
  struct Option {
    FanChoice f1, f2;
    Point3 y, C;
    double error = std::numeric_limits<double>::infinity();
  };
  Option best;
  for (const Point3& y : unit_apexes(A, D, C0)) {
    Option o;
    o.y = y;
    o.f1 = fan_towards(A, D, E, y, ctx.opt.max_multiplier, ctx.fan_tol);
    o.C = onto_unit_circle(C0, D, o.f1.apex);
    if ((o.C - A).norm() >= kSqrt3) continue;
    o.f2 = fan_towards(A, o.C, o.f1.apex, B0, ctx.opt.max_multiplier, ctx.fan_tol);
    o.error = std::max((o.C - C0).norm(), o.f2.error);
    if (o.error < best.error) best = o;
  }
  if (!std::isfinite(best.error)) fail(ErrorKind::Packing, "no admissible cap over the pentagon");

  Piece p;
  p.s = std::move(sub.s);
  const int iA = sub.idx[0], iE = sub.idx[1], iD = sub.idx[2];
  const int iy = merge_into(p.s, fan_dome(A, D, E, best.f1.m), {iA, iD, iE}).back();
  const int iC = p.s.add_vertex(best.C);
  p.s.add_face(iC, iD, iy);
  const int iB = merge_into(p.s, fan_dome(A, best.C, best.f1.apex, best.f2.m), {iA, iC, iy}).back();
  p.idx = {iA, iB, iC, iD};
  p.pts = {A, best.f2.apex, best.C, D};
  p.idx.insert(p.idx.end(), sub.idx.begin() + 3, sub.idx.end());
  p.pts.insert(p.pts.end(), sub.pts.begin() + 3, sub.pts.end());
  ctx.log.caps.push_back({n, z, {best.f1.m, best.f2.m}, {best.f1.error, best.error}});
  check_faces(ctx, p.s);
  return p;
}

std::vector<Point3> relabel(const std::vector<Point3>& v, int start, int dir) {
  const int n = static_cast<int>(v.size());
  std::vector<Point3> w(n);
  for (int j = 0; j < n; ++j) w[j] = v[((start + dir * j) % n + n) % n];
  return w;
}

struct Labeling {
  int start = 0, dir = 1;
  double margin = -std::numeric_limits<double>::infinity();
};

Labeling best_labeling(const std::vector<Point3>& v) {
  Labeling best;
  const int n = static_cast<int>(v.size());
  for (int dir : {1, -1})
    for (int s = 0; s < n; ++s) {
      const double m = recursion_margin(relabel(v, s, dir));
      if (m > best.margin + 1e-12) best = {s, dir, m};
    }
  return best;
}

// Domes the curve in the given labelling and returns the piece in the
// original vertex order.
Piece dome_labeled(const std::vector<Point3>& v, const Labeling& lab, Context& ctx) {
  const int n = static_cast<int>(v.size());
  Piece p = dome_rec(relabel(v, lab.start, lab.dir), ctx);
  Piece out;
  out.s = std::move(p.s);
  out.idx.resize(n);
  out.pts.resize(n);
  for (int j = 0; j < n; ++j) {
    const int i = ((lab.start + lab.dir * j) % n + n) % n;
    out.idx[i] = p.idx[j];
    out.pts[i] = p.pts[j];
  }
  return out;
}

// Undo `plan` starting from the domed approximation of its end state. Each
// inverse flip picks its own multiplier to land nearest the recorded
// position, so boundary errors are not magnified by the forward multipliers.
void pull_back(Piece& piece, const std::vector<IntegralCurve>& states, const FlipPlan& plan,
               Context& ctx) {
  const int n = static_cast<int>(piece.pts.size());
  for (int j = static_cast<int>(plan.steps.size()) - 1; j >= 0; --j) {
    const int k = plan.steps[j].k - 1;
    const int prev = (k + n - 1) % n, next = (k + 1) % n;
    const Point3 target = states[j].vertices[k];
    const double axis = (piece.pts[next] - piece.pts[prev]).norm();
    if (axis >= kSqrt3 || axis < 1e-9) fail(ErrorKind::Approximation, "pull-back flip axis degenerated");
    const FanChoice f = fan_towards(piece.pts[prev], piece.pts[next], piece.pts[k], target,
                                    ctx.opt.max_multiplier, ctx.fan_tol);
    const auto map = merge_into(piece.s, fan_dome(piece.pts[prev], piece.pts[next], piece.pts[k], f.m),
                            {piece.idx[prev], piece.idx[next], piece.idx[k]});
    piece.idx[k] = map.back();
    piece.pts[k] = f.apex;
    ctx.log.pullback.steps.push_back({k + 1, f.m});
    check_faces(ctx, piece.s);
  }
}

std::vector<IntegralCurve> forward_states(const IntegralCurve& c, const FlipPlan& plan) {
  std::vector<IntegralCurve> states{c};
  for (const auto& step : plan.steps) states.push_back(flip_apply(states.back(), step).curve);
  return states;
}

// Short flip sequences with small multipliers towards a curve the recursion
// accepts; beam search on the best labelling margin.
FlipPlan short_flip_plan(const IntegralCurve& c, double margin_goal) {
  struct Node {
    IntegralCurve curve;
    FlipPlan plan;
    double margin;
  };
  const int n = static_cast<int>(c.size());
  std::vector<Node> beam{{c, {}, best_labeling(c.vertices).margin}};
  for (int depth = 0; depth < 3; ++depth) {
    std::vector<Node> next;
    for (const Node& node : beam)
      for (int k = 1; k <= n; ++k) {
        const double axis = (node.curve[k] - node.curve[k + n - 2]).norm();
        if (axis >= kSqrt3 - 1e-9 || axis < 1e-9) continue;
        for (int m = -24; m <= 24; ++m) {
          if (m == 0) continue;
          Node child{flip_apply(node.curve, {k, m}).curve, node.plan, 0.0};
          child.plan.steps.push_back({k, m});
          child.margin = best_labeling(child.curve.vertices).margin;
          if (child.margin > margin_goal) return child.plan;
          next.push_back(std::move(child));
        }
      }
    std::stable_sort(next.begin(), next.end(), [](const Node& a, const Node& b) { return a.margin > b.margin; });
    if (next.size() > 6) next.resize(6);
    beam = std::move(next);
  }
  fail(ErrorKind::Packing, "no short flip sequence reaches a feasible curve");
}

ApproxResult finish(Piece piece, const IntegralCurve& reference, double eps, ApproxLog log) {
  ApproxResult r;
  r.curve_out = IntegralCurve::unit(piece.pts);
  r.dome = std::move(piece.s);
  orient_consistently(r.dome);
  r.frechet = frechet_distance(r.curve_out, reference);
  r.log = std::move(log);
  const DomeVerdict v = verify_dome(r.dome, r.curve_out);
  if (!v.pass) {
    std::ostringstream os;
    os << "constructed dome failed verification:";
    for (const auto& reason : v.reasons) os << ' ' << reason;
    fail(ErrorKind::Approximation, os.str());
  }
  if (!(r.frechet < eps)) {
    std::ostringstream os;
    os << "approximation reached Frechet distance " << r.frechet << ", not below " << eps;
    fail(ErrorKind::Approximation, os.str());
  }
  return r;
}

void require_unit(const IntegralCurve& c, std::size_t n) {
  if (c.size() != n) fail(ErrorKind::Dimension, "unexpected number of vertices");
  for (int l : c.lengths)
    if (l != 1) fail(ErrorKind::Precondition, "curve must have unit edges");
  if (!validate_curve(c).pass) fail(ErrorKind::Precondition, "curve edges do not have their declared lengths");
}

}  // namespace

double recursion_margin(const std::vector<Point3>& w) {
  const int n = static_cast<int>(w.size());
  if (n <= 3) return 1.0;
  if (n == 4) return kSqrt3 - (w[2] - w[0]).norm();
  double m = std::numeric_limits<double>::infinity();
  for (int i = 2; i <= n - 2; ++i) m = std::min(m, kSqrt3 - (w[i] - w[0]).norm());
  for (int i = 2; i <= n - 3; ++i) m = std::min(m, 1.0 - circumradius(w[0], w[i], w[i + 1]));
  return m;
}

ApproxResult dome_pentagon(const IntegralCurve& c, double eps, const ApproxOptions& opt) {
  if (!(eps > 0.0)) fail(ErrorKind::Precondition, "eps must be positive");
  require_unit(c, 5);
  ApproxLog log;
  log.route = "direct";
  log.seed = opt.seed;
  Context ctx{opt, eps / 4.0, std::mt19937_64(opt.seed), log};
  log.fan_tolerance = ctx.fan_tol;
  log.attempts = 1;
  Piece p = pentagon_piece(c.vertices, ctx);
  return finish(std::move(p), c, eps, std::move(log));
}

ApproxResult dome_curve(const IntegralCurve& c, double eps, const ApproxOptions& opt) {
  if (!(eps > 0.0)) fail(ErrorKind::Precondition, "eps must be positive");
  const auto report = validate_curve(c);
  if (!report.pass) {
    std::ostringstream os;
    os << "edge " << report.first_failing_edge << " does not have its declared length";
    fail(ErrorKind::Malformed, os.str());
  }
  const IntegralCurve unit = subdivide_unit(c);
  const int n = static_cast<int>(unit.size());
  if (n == 3) {
    ApproxLog log;
    log.route = "triangle";
    log.seed = opt.seed;
    return finish(triangle_piece(unit.vertices), unit, eps, std::move(log));
  }

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt < std::max(1, opt.max_attempts); ++attempt) {
    ApproxLog log;
    log.seed = opt.seed + 7919ULL * attempt;
    log.attempts = attempt + 1;
    log.perturbation = eps / 8.0;
    Context ctx{opt, eps / (4.0 * n) / std::pow(4.0, attempt), std::mt19937_64(log.seed), log};
    log.fan_tolerance = ctx.fan_tol;
    try {
      const IntegralCurve generic = perturb_generic(unit, log.perturbation, log.seed);
      const Labeling direct = best_labeling(generic.vertices);
      if (direct.margin > opt.feasibility_margin) {
        log.route = "direct";
        log.start = direct.start;
        log.direction = direct.dir;
        return finish(dome_labeled(generic.vertices, direct, ctx), unit, eps, std::move(log));
      }
      FlipPlan plan;
      try {
        plan = short_flip_plan(generic, opt.feasibility_margin);
        log.route = "flips";
      } catch (const Error&) {
        PackingConfig cfg;
        cfg.accept = [&](std::span<const int> order, std::span<const Vec2> u) {
          std::vector<Point3> poly{Point3::Zero()};
          for (std::size_t i = 0; i + 1 < order.size(); ++i)
            poly.push_back(poly.back() + Point3(u[order[i]].x(), u[order[i]].y(), 0.0));
          return best_labeling(poly).margin > 2.0 * opt.feasibility_margin;
        };
        plan = pack_curve(generic, LinearFunctional::random(log.seed), cfg).plan;
        log.route = "packing";
      }
      log.pre_plan = plan;
      const auto states = forward_states(generic, plan);
      const Labeling lab = best_labeling(states.back().vertices);
      if (lab.margin <= 0.0) fail(ErrorKind::Packing, "flipped curve is not feasible for the recursion");
      log.start = lab.start;
      log.direction = lab.dir;
      Piece piece = dome_labeled(states.back().vertices, lab, ctx);
      pull_back(piece, states, plan, ctx);
      return finish(std::move(piece), unit, eps, std::move(log));
    } catch (const Error& e) {
      last_error = e.what();
      if (e.kind() != ErrorKind::Approximation && e.kind() != ErrorKind::Packing &&
          e.kind() != ErrorKind::Stall && e.kind() != ErrorKind::Perturbation)
        throw;
    }
  }
  fail(ErrorKind::Approximation, "all attempts failed; last: " + last_error);
}

}  // namespace domes
