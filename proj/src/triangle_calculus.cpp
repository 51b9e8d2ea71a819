#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "domes/regular.hpp"

namespace domes {

namespace {

const double kHalfSqrt3 = std::sqrt(3.0) / 2.0;

// A surface over a triangle with apex `o` and base corners `x`, `y`.
struct Piece {
  TriSurface s;
  std::array<Point3, 3> corners;
  bool trusted = true;  // built from verified parts only
};

IntegralCurve corner_curve(const std::array<Point3, 3>& c, int leg, int base) {
  IntegralCurve out;
  out.vertices = {c[0], c[1], c[2]};
  out.lengths = {leg, base, leg};
  return out;
}

Piece place(const Piece& p, const std::array<Point3, 3>& to) {
  const RigidMotion m = best_fit_motion(p.corners, to);
  for (int i = 0; i < 3; ++i)
    if ((m.apply(p.corners[i]) - to[i]).norm() > 1e-9)
      fail(ErrorKind::Construction, "piece does not fit its slot");
  return {transformed(p.s, m), to, p.trusted};
}

// Joins the pieces along coincident vertices.
Piece assemble(const std::vector<Piece>& parts, const std::array<Point3, 3>& corners, const Tolerance& tol) {
  Piece out;
  out.corners = corners;
  for (const Piece& p : parts) {
    out.s = out.s.vertices.empty() ? p.s : glue_coincident(out.s, p.s, tol);
    out.trusted = out.trusted && p.trusted;
  }
  orient_consistently(out.s);
  return out;
}

// Unit apex over the circumcentre of a planar polygon, at distance k from every corner.
Point3 lift_over(const Point3& centre, double radius, int k) {
  const double h2 = double(k) * k - radius * radius;
  if (h2 <= 1e-12) fail(ErrorKind::Construction, "legs are too short to span the base");
  return centre + std::sqrt(h2) * Point3::UnitZ();
}

class Builder {
 public:
  Builder(const Piece* base, const ComposeOptions& opt) : base_(base), opt_(opt) {}

  std::vector<ComposeStep> steps;
  bool all_verified = true;

  // Dome over (k, k, l) with apex first.
  const Piece& isosceles(int k, int l) {
    const auto key = std::make_pair(k, l);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Piece p;
    ComposeStep step;
    step.result = {k, k, l};
    if (k == 2 && l == 1) {
      step.rule = ComposeStep::Rule::Base;
      if (base_) p = *base_;
    } else if (l == k) {
      step.rule = ComposeStep::Rule::Planar;
      if (base_) p = planar(k);
    } else if (l >= 2) {
      if (!(l - 1 < std::sqrt(3.0) * k))
        fail(ErrorKind::Construction, "attach rule needs l < sqrt(3) k for " + step.result.str());
      step.rule = ComposeStep::Rule::Attach;
      step.inputs = {{k, k, l - 1}, {k, k, 1}, {1, l - 1, 1}};
      const Piece& body = isosceles(k, l - 1);
      const Piece& thin = isosceles(k, 1);
      record_trapezoid(l - 1);
      if (base_) p = attach(k, l, body, thin);
    } else {
      // (k, k, 1) from (k-1, k-1, k) twice and (k-1, k-1, 1).
      const int j = k - 1;
      if (j < 2) fail(ErrorKind::Construction, "no construction for " + step.result.str());
      if (!(k < std::sqrt(3.0) * j))
        fail(ErrorKind::Construction, "tetrahedron rule needs l < sqrt(3) k for " + step.result.str());
      step.rule = ComposeStep::Rule::Tetrahedron;
      step.inputs = {{j, j, k}, {j, j, k}, {j, j, 1}};
      const Piece& wide = isosceles(j, k);
      const Piece& thin = isosceles(j, 1);
      if (base_) p = tetrahedron(j, k, wide, thin);
    }
    check(p, step.result);
    steps.push_back(step);
    return memo_.emplace(key, std::move(p)).first->second;
  }

  Piece span(const TriangleSpec& t) {
    const double a = t.a, b = t.b, c = t.c;
    // P0 P1 = a, P1 P2 = b, P2 P0 = c.
    const Point3 p0 = Point3::Zero(), p1(a, 0, 0);
    const double x = (a * a + c * c - b * b) / (2 * a);
    const Point3 p2(x, std::sqrt(std::max(0.0, c * c - x * x)), 0);
    const double area2 = (p1 - p0).cross(p2 - p0).norm();
    const double radius = a * b * c / (2 * area2);
    int k = std::max({t.a, t.b, t.c});
    while (k <= radius + 1e-9) ++k;
    ComposeStep step;
    step.rule = ComposeStep::Rule::Span;
    step.result = t;
    step.inputs = {{k, k, t.a}, {k, k, t.b}, {k, k, t.c}};
    const Piece& pa = isosceles(k, t.a);
    const Piece& pb = isosceles(k, t.b);
    const Piece& pc = isosceles(k, t.c);
    Piece out;
    if (base_) {
      // Circumcentre of the planar triangle.
      const double d = 2 * (p1.x() * p2.y() - p1.y() * p2.x());
      const double ux = (p2.y() * p1.squaredNorm() - p1.y() * p2.squaredNorm()) / d;
      const double uy = (p1.x() * p2.squaredNorm() - p2.x() * p1.squaredNorm()) / d;
      const Point3 o = lift_over({ux, uy, 0}, radius, k);
      out = assemble({place(pa, {o, p0, p1}), place(pb, {o, p1, p2}), place(pc, {o, p2, p0})},
                     {p0, p1, p2}, opt_.tol);
      if (opt_.verify && out.trusted) {
        IntegralCurve curve;
        curve.vertices = {p0, p1, p2};
        curve.lengths = {t.a, t.b, t.c};
        if (!verify_dome(out.s, curve, opt_.tol).pass)
          fail(ErrorKind::Construction, "span over " + t.str() + " failed verification");
      } else {
        all_verified = false;
      }
    }
    steps.push_back(step);
    return out;
  }

 private:
  const Piece* base_;
  ComposeOptions opt_;
  std::map<std::pair<int, int>, Piece> memo_;
  std::map<int, bool> trapezoids_;

  void record_trapezoid(int l) {
    if (trapezoids_[l]) return;
    trapezoids_[l] = true;
    ComposeStep step;
    step.rule = ComposeStep::Rule::Trapezoid;
    step.result = {1, l, 1};
    steps.push_back(step);
  }

  void check(const Piece& p, const TriangleSpec& t) {
    if (!base_) return;
    if (!opt_.verify || !p.trusted) {
      all_verified = false;
      return;
    }
    const DomeVerdict v = verify_dome(p.s, corner_curve(p.corners, t.a, t.c), opt_.tol);
    if (!v.pass) fail(ErrorKind::Construction, "intermediate " + t.str() + " failed verification");
  }

  static Piece planar(int k) {
    Piece p;
    p.s = equilateral_grid(k);
    p.corners = {Point3(0, k * kHalfSqrt3, 0), Point3(-0.5 * k, 0, 0), Point3(0.5 * k, 0, 0)};
    return p;
  }

  // (k, k, l) over the trapezoid with parallel sides l - 1 and l.
  Piece attach(int k, int l, const Piece& body, const Piece& thin) const {
    const int s = l - 1;
    const Point3 a(-0.5 * l, 0, 0), b(0.5 * l, 0, 0);
    const Point3 c(-0.5 * s, kHalfSqrt3, 0), d(0.5 * s, kHalfSqrt3, 0);
    const double y0 = (1.0 - s) / (2.0 * std::sqrt(3.0));
    const double radius = std::hypot(0.5 * l, y0);
    const Point3 o = lift_over({0, y0, 0}, radius, k);
    Piece strip;
    strip.s = trapezoid_strip(s);
    strip.corners = {a, b, c};
    return assemble({place(body, {o, c, d}), place(thin, {o, a, c}), place(thin, {o, d, b}), strip},
                    {o, a, b}, opt_.tol);
  }

  // (l, l, 1) as the open face of a tetrahedron with legs k.
  Piece tetrahedron(int k, int l, const Piece& wide, const Piece& thin) const {
    const double ha = std::sqrt(double(l) * l - 0.25);
    const Point3 a(0, ha, 0), b(-0.5, 0, 0), c(0.5, 0, 0);
    const double y0 = (ha * ha - 0.25) / (2 * ha);
    const Point3 o = lift_over({0, y0, 0}, ha - y0, k);
    return assemble({place(wide, {o, a, b}), place(wide, {o, a, c}), place(thin, {o, b, c})},
                    {a, b, c}, opt_.tol);
  }
};

// Corners of a (2, 2, 1) boundary: apex, then the base pair.
std::array<Point3, 3> base_corners(const TriSurface& base) {
  const auto loops = boundary_loops(base);
  if (loops.size() != 1 || loops[0].size() != 5)
    fail(ErrorKind::Construction, "base boundary is not the unit-spaced (2,2,1) triangle");
  const auto& loop = loops[0];
  std::vector<int> corners;
  for (int i = 0; i < 5; ++i) {
    const Point3& p = base.vertices[loop[(i + 4) % 5]];
    const Point3& q = base.vertices[loop[i]];
    const Point3& r = base.vertices[loop[(i + 1) % 5]];
    if ((q - p).cross(r - q).norm() > 1e-6) corners.push_back(i);
  }
  if (corners.size() != 3) fail(ErrorKind::Construction, "base boundary does not have three corners");
  for (int apex = 0; apex < 3; ++apex) {
    const int i = corners[apex], j = corners[(apex + 1) % 3], k = corners[(apex + 2) % 3];
    const Point3 o = base.vertices[loop[i]];
    const Point3 x = base.vertices[loop[j]], y = base.vertices[loop[k]];
    if (std::abs((x - y).norm() - 1.0) < 1e-6) return {o, x, y};
  }
  fail(ErrorKind::Construction, "base boundary has no unit side");
}

}  // namespace

void TriangleSpec::check() const {
  if (a <= 0 || b <= 0 || c <= 0) fail(ErrorKind::Precondition, "triangle sides must be positive");
  if (!(a < b + c && b < a + c && c < a + b))
    fail(ErrorKind::Precondition, "triangle inequality fails for " + str());
}

std::string TriangleSpec::str() const {
  std::ostringstream os;
  os << "(" << a << "," << b << "," << c << ")";
  return os.str();
}

IntegralCurve triangle_curve(const TriangleSpec& t) {
  t.check();
  const double x = (double(t.a) * t.a + double(t.c) * t.c - double(t.b) * t.b) / (2.0 * t.a);
  IntegralCurve c;
  c.vertices = {Point3::Zero(), Point3(t.a, 0, 0), Point3(x, std::sqrt(double(t.c) * t.c - x * x), 0)};
  c.lengths = {t.a, t.b, t.c};
  return c;
}

ReductionResult triangle_reduction(const TriangleSpec& t) {
  if (!(t.a == 2 && t.b == 2 && t.c == 1))
    fail(ErrorKind::Unsupported, "triangle reduction exists only for (2,2,1)");
  const double h = std::sqrt(3.75);
  const Point3 q(-0.5, 0, 0), r(0.5, 0, 0), p(0, h, 0);
  const Point3 m = 0.5 * (p + q), n = 0.5 * (p + r);
  const Point3 y(0, h / 4 - 0.1875 / h, std::sqrt(0.6));
  ReductionResult out;
  const int im = out.surface.add_vertex(m), iq = out.surface.add_vertex(q);
  const int ir = out.surface.add_vertex(r), in = out.surface.add_vertex(n);
  const int iy = out.surface.add_vertex(y);
  out.surface.add_face(im, iq, iy);
  out.surface.add_face(iq, ir, iy);
  out.surface.add_face(ir, in, iy);
  out.rhombus = {m, p, n, y};
  out.spec = {(n - m).norm(), (y - p).norm()};
  out.triangle = {p, q, r};
  return out;
}

TriSurface equilateral_grid(int k) {
  if (k < 1) fail(ErrorKind::Precondition, "grid side must be positive");
  TriSurface s;
  // Row i has k - i + 1 points at height i * sqrt(3)/2.
  std::vector<std::vector<int>> row(k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k - i; ++j)
      row[i].push_back(s.add_vertex({-0.5 * k + 0.5 * i + j, i * kHalfSqrt3, 0}));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k - i; ++j) {
      s.add_face(row[i][j], row[i][j + 1], row[i + 1][j]);
      if (j + 1 < k - i) s.add_face(row[i][j + 1], row[i + 1][j + 1], row[i + 1][j]);
    }
  return s;
}

TriSurface trapezoid_strip(int l) {
  if (l < 1) fail(ErrorKind::Precondition, "trapezoid top must be positive");
  TriSurface s;
  std::vector<int> bottom, top;
  for (int i = 0; i <= l + 1; ++i) bottom.push_back(s.add_vertex({-0.5 * (l + 1) + i, 0, 0}));
  for (int i = 0; i <= l; ++i) top.push_back(s.add_vertex({-0.5 * l + i, kHalfSqrt3, 0}));
  for (int i = 0; i <= l; ++i) s.add_face(bottom[i], bottom[i + 1], top[i]);
  for (int i = 0; i < l; ++i) s.add_face(top[i], bottom[i + 1], top[i + 1]);
  return s;
}

std::string rule_name(ComposeStep::Rule r) {
  switch (r) {
    case ComposeStep::Rule::Base: return "base";
    case ComposeStep::Rule::Planar: return "planar";
    case ComposeStep::Rule::Trapezoid: return "trapezoid";
    case ComposeStep::Rule::Attach: return "attach";
    case ComposeStep::Rule::Tetrahedron: return "tetrahedron";
    case ComposeStep::Rule::Span: return "span";
  }
  return "unknown";
}

namespace {

bool chain_isosceles(const TriangleSpec& t) { return t.a == t.b && t.c <= t.a + 1; }

}  // namespace

std::vector<ComposeStep> compose_plan(const TriangleSpec& target) {
  target.check();
  Builder b(nullptr, {});
  if (chain_isosceles(target))
    b.isosceles(target.a, target.c);
  else
    b.span(target);
  return b.steps;
}

TriSurface mock_base_221() {
  const double h = std::sqrt(3.75);
  const Point3 o(0, h, 0), x(-0.5, 0, 0), y(0.5, 0, 0);
  TriSurface s;
  const int io = s.add_vertex(o), ix = s.add_vertex(x), iy = s.add_vertex(y);
  const int mx = s.add_vertex(0.5 * (o + x)), my = s.add_vertex(0.5 * (o + y));
  const int c = s.add_vertex((o + x + y) / 3.0);
  s.add_face(io, mx, c);
  s.add_face(mx, ix, c);
  s.add_face(ix, iy, c);
  s.add_face(iy, my, c);
  s.add_face(my, io, c);
  s.unit_flag = false;
  return s;
}

ComposeResult triangle_compose(const TriSurface& base, const TriangleSpec& target, const ComposeOptions& opt) {
  target.check();
  Piece root;
  root.s = base;
  root.corners = base_corners(base);
  root.trusted = opt.verify && verify_dome(base, corner_curve(root.corners, 2, 1), opt.tol).pass;
  if (opt.verify && !root.trusted)
    fail(ErrorKind::Construction, "base is not a unit dome over (2,2,1)");
  Builder b(&root, opt);
  ComposeResult out;
  if (chain_isosceles(target)) {
    const Piece& p = b.isosceles(target.a, target.c);
    out.surface = p.s;
  } else {
    out.surface = b.span(target).s;
  }
  out.steps = b.steps;
  out.verified = opt.verify && b.all_verified;
  return out;
}

}  // namespace domes
