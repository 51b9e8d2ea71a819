#include "domes/regular.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace domes {

namespace {

constexpr double kPi = std::numbers::pi;

double circumradius_of_ngon(int n) { return 0.5 / std::sin(kPi / n); }

Point3 polar(double radius, double angle, double z = 0.0) {
  return {radius * std::cos(angle), radius * std::sin(angle), z};
}

Point3 rotate_z(const Point3& p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x() - s * p.y(), s * p.x() + c * p.y(), p.z()};
}

// Erects a unit-edge pyramid over a planar square or pentagon, on the side of `away`.
void add_pyramid(TriSurface& s, const std::vector<int>& base, const Point3& away) {
  Point3 centre = Point3::Zero();
  for (int i : base) centre += s.vertices[i];
  centre /= static_cast<double>(base.size());
  const Point3& p0 = s.vertices[base[0]];
  Point3 normal = (s.vertices[base[1]] - p0).cross(s.vertices[base[2]] - p0).normalized();
  if (normal.dot(away) < 0) normal = -normal;
  const double h = std::sqrt(1.0 - (p0 - centre).squaredNorm());
  const int apex = s.add_vertex(centre + h * normal);
  for (std::size_t i = 0; i < base.size(); ++i)
    s.add_face(base[i], base[(i + 1) % base.size()], apex);
}

std::vector<int> add_polygon(TriSurface& s, int n) {
  const double radius = circumradius_of_ngon(n);
  std::vector<int> idx;
  for (int j = 0; j < n; ++j) idx.push_back(s.add_vertex(polar(radius, (2 * j + 1) * kPi / n)));
  return idx;
}

TriSurface cone_dome(int n) {
  TriSurface s;
  const auto v = add_polygon(s, n);
  const double radius = circumradius_of_ngon(n);
  const int apex = s.add_vertex({0, 0, std::sqrt(std::max(0.0, 1.0 - radius * radius))});
  for (int j = 0; j < n; ++j) s.add_face(v[j], v[(j + 1) % n], apex);
  return s;
}

// Cupola over the 2k-gon with a k-gon on top; every square and the top face get a pyramid.
TriSurface cupola_dome(int k) {
  const int n = 2 * k;
  TriSurface s;
  const auto v = add_polygon(s, n);
  const double top_radius = circumradius_of_ngon(k);
  const Point3 v0 = s.vertices[v[0]];
  const Point3 t0 = polar(top_radius, 0.0);
  const double h = std::sqrt(1.0 - (v0 - t0).squaredNorm());
  std::vector<int> top;
  for (int i = 0; i < k; ++i) top.push_back(s.add_vertex(polar(top_radius, 2.0 * kPi * i / k, h)));
  for (int i = 0; i < k; ++i) {
    const int a = top[i], b = top[(i + 1) % k];
    const Point3 mid = 0.5 * (s.vertices[v[2 * i]] + s.vertices[b]);
    add_pyramid(s, {v[2 * i], v[2 * i + 1], b, a}, Point3(mid.x(), mid.y(), 0.0));
    s.add_face(v[2 * i + 1], v[(2 * i + 2) % n], b);
  }
  add_pyramid(s, top, Point3::UnitZ());
  return s;
}

// Hexagon core, squares on its sides and triangles in the gaps, pyramids on the squares.
TriSurface dodecagon_dome() {
  TriSurface s;
  const int c = s.add_vertex(Point3::Zero());
  std::vector<int> hex, outer_a, outer_b;
  for (int k = 0; k < 6; ++k) hex.push_back(s.add_vertex(polar(1.0, k * kPi / 3)));
  for (int k = 0; k < 6; ++k) {
    const Point3 out = polar(1.0, (k + 0.5) * kPi / 3);
    outer_a.push_back(s.add_vertex(s.vertices[hex[k]] + out));
    outer_b.push_back(s.add_vertex(s.vertices[hex[(k + 1) % 6]] + out));
  }
  for (int k = 0; k < 6; ++k) {
    const int next = (k + 1) % 6;
    s.add_face(c, hex[k], hex[next]);
    add_pyramid(s, {hex[k], outer_a[k], outer_b[k], hex[next]}, Point3::UnitZ());
    s.add_face(hex[next], outer_b[k], outer_a[next]);
  }
  return s;
}

// Apex-height data of one sector layer: radial coordinate in its mirror plane and height.
struct Layer {
  double s = 0.0, z = 0.0;
};

struct Sector {
  int n = 0;
  std::vector<Layer> layers;    // boundary vertices, triangle tips, then ring vertices
  std::vector<int> m;           // ring multipliers followed by the closing one
  std::vector<double> tilts;    // tilt of each layer from the triangles on
  std::vector<double> gaps;
  double delta = 0.0;           // signed radial offset of the closing apex
  double top = 0.0;             // height of the closing apex
  std::vector<std::pair<int, double>> closings;  // admissible closing multipliers and offsets
  bool valid = false;
  std::string why;

  double azimuth(std::size_t k) const { return (k % 2 == 0) ? 0.0 : kPi / n; }
  Point3 copy(std::size_t k, double az) const {
    return polar(layers[k].s, az, layers[k].z);
  }
};

struct Candidate {
  Point3 apex;
  double s = 0.0, z = 0.0, tilt = 0.0;
};

Candidate evaluate(const Point3& a, const Point3& b, const Point3& start, int m, double az) {
  Candidate c;
  c.apex = fan_apex(a, b, start, m);
  c.s = c.apex.x() * std::cos(az) + c.apex.y() * std::sin(az);
  c.z = c.apex.z();
  const Point3 mid = 0.5 * (a + b);
  const double sc = mid.x() * std::cos(az) + mid.y() * std::sin(az);
  c.tilt = std::atan2(c.z - mid.z(), sc - c.s);
  return c;
}

// Runs the sector construction at tilt theta. With `frozen` the multipliers are
// reused; otherwise each is the smallest one meeting the window rules.
Sector simulate(int n, double theta, const std::vector<int>* frozen, const NgonOptions& opt) {
  Sector sec;
  sec.n = n;
  const double h = std::sqrt(3.0) / 2.0;
  const double inner = 0.5 / std::tan(kPi / n);
  sec.layers.push_back({circumradius_of_ngon(n), 0.0});
  sec.layers.push_back({inner - h * std::cos(theta), h * std::sin(theta)});
  sec.tilts.push_back(theta);
  std::size_t used = 0;
  auto next_frozen = [&]() -> std::optional<int> {
    if (!frozen) return std::nullopt;
    if (used >= frozen->size()) return 0;
    return (*frozen)[used++];
  };

  for (int ring = 0;; ++ring) {
    const std::size_t k = sec.layers.size() - 1;
    const double beta = sec.layers[k].s;
    if (beta <= 0.0) {
      sec.why = "ring vertices crossed the axis";
      return sec;
    }
    const double gap = 2.0 * beta * std::sin(kPi / n);
    if (gap >= std::sqrt(3.0)) {
      sec.why = "ring gap reached sqrt(3)";
      return sec;
    }
    sec.gaps.push_back(gap);
    const bool closing = beta < std::sqrt(1.0 - gap * gap / 4.0);
    const bool frozen_closing = frozen && used + 1 == frozen->size();
    if (frozen && closing != frozen_closing) {
      sec.why = "ring count changed";
      return sec;
    }
    const double az = sec.azimuth(k + 1);
    const Point3 a = sec.copy(k, az - kPi / n), b = sec.copy(k, az + kPi / n);
    const Point3 start = sec.copy(k - 1, az);
    const Point3 mid = 0.5 * (a + b);

    if (!closing && ring >= opt.max_rings) {
      sec.why = "ring budget exhausted";
      return sec;
    }
    std::optional<Candidate> pick;
    int pick_m = 0;
    auto accept = [&](const Candidate& c) {
      if (closing) return c.z > mid.z() && std::abs(c.s) < opt.closing_window;
      return c.tilt > sec.tilts.back() && c.tilt < sec.tilts.back() + opt.ring_window;
    };
    if (auto fm = next_frozen()) {
      if (*fm == 0) {
        sec.why = "multiplier list too short";
        return sec;
      }
      const Candidate c = evaluate(a, b, start, *fm, az);
      if (!closing && !(c.tilt > sec.tilts.back() && c.tilt < kPi / 2)) {
        sec.why = "ring tilt no longer increases";
        return sec;
      }
      pick = c;
      pick_m = *fm;
    } else {
      const std::size_t wanted = closing ? opt.closing_candidates : 1;
      for (int mm = 1; mm <= opt.max_multiplier && sec.closings.size() < wanted; ++mm)
        for (int sign : {1, -1}) {
          const Candidate c = evaluate(a, b, start, sign * mm, az);
          if (!accept(c)) continue;
          if (!pick) {
            pick = c;
            pick_m = sign * mm;
          }
          if (!closing) break;
          sec.closings.emplace_back(sign * mm, c.s);
        }
      if (!pick) {
        sec.why = closing ? "no closing multiplier within the window" : "no multiplier advances the ring";
        return sec;
      }
    }
    sec.m.push_back(pick_m);
    if (closing) {
      sec.delta = pick->s;
      sec.top = pick->z;
      sec.valid = true;
      return sec;
    }
    sec.layers.push_back({pick->s, pick->z});
    sec.tilts.push_back(pick->tilt);
  }
}

struct Root {
  Sector sector;
  double theta = 0.0;
};

std::optional<Root> close_in_theta(int n, double theta0, const Sector& planned, const NgonOptions& opt) {
  auto eval = [&](double t) { return simulate(n, t, &planned.m, opt); };
  const double lo_limit = 1e-6, hi_limit = kPi / 2 - 1e-6;
  double a = theta0, fa = planned.delta;
  if (fa == 0.0) return Root{planned, theta0};
  double b = 0.0;
  bool found = false;
  for (double step = 1e-7; step < 0.5 && !found; step *= 2.0)
    for (int dir : {1, -1}) {
      const double t = theta0 + dir * step;
      if (t <= lo_limit || t >= hi_limit) continue;
      const Sector s = eval(t);
      if (!s.valid) continue;
      if ((s.delta > 0) != (fa > 0)) {
        b = t;
        found = true;
        break;
      }
    }
  if (!found) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    const Sector s = eval(mid);
    if (!s.valid) return std::nullopt;
    if ((s.delta > 0) == (fa > 0)) {
      a = mid;
      fa = s.delta;
    } else {
      b = mid;
    }
  }
  Sector sa = eval(a), sb = eval(b);
  if (!sa.valid || !sb.valid) return std::nullopt;
  return std::abs(sa.delta) <= std::abs(sb.delta) ? Root{sa, a} : Root{sb, b};
}

TriSurface build_surface(const Sector& sec) {
  const int n = sec.n;
  TriSurface s;
  std::vector<std::vector<int>> idx(sec.layers.size());
  for (std::size_t k = 0; k < sec.layers.size(); ++k)
    for (int j = 0; j < n; ++j)
      idx[k].push_back(s.add_vertex(sec.copy(k, sec.azimuth(k) + 2.0 * kPi * j / n)));
  for (int j = 0; j < n; ++j) s.add_face(idx[0][j], idx[0][(j + 1) % n], idx[1][j]);

  const int apex = s.add_vertex({0.0, 0.0, sec.top});
  for (std::size_t r = 0; r < sec.m.size(); ++r) {
    const std::size_t k = r + 1;  // axis layer
    const bool last = r + 1 == sec.m.size();
    for (int j = 0; j < n; ++j) {
      // Axis copies at az -/+ pi/n around the new vertex's mirror plane.
      int ia, ib;
      if ((k + 1) % 2 == 0) {
        ia = idx[k][(j + n - 1) % n];
        ib = idx[k][j];
      } else {
        ia = idx[k][j];
        ib = idx[k][(j + 1) % n];
      }
      const int is = idx[k - 1][j];
      TriSurface fan = fan_dome(s.vertices[ia], s.vertices[ib], s.vertices[is], sec.m[r]);
      std::vector<int> fixed(fan.vertices.size(), -1);
      fixed[0] = ia;
      fixed[1] = ib;
      fixed[2] = is;
      fixed.back() = last ? apex : idx[k + 1][j];
      merge_into(s, fan, fixed);
    }
  }
  for (auto& p : s.vertices) p = rotate_z(p, kPi / n);
  return s;
}

}  // namespace

IntegralCurve regular_polygon(int n, int r) {
  if (n < 3) fail(ErrorKind::Precondition, "a polygon needs at least 3 sides");
  if (r < 1) fail(ErrorKind::Precondition, "side length must be a positive integer");
  std::vector<Point3> v;
  const double radius = r * circumradius_of_ngon(n);
  for (int j = 0; j < n; ++j) v.push_back(polar(radius, (2 * j + 1) * kPi / n));
  IntegralCurve c;
  c.vertices = std::move(v);
  c.lengths.assign(n, r);
  return c;
}

TriSurface classical_dome(int n) {
  switch (n) {
    case 3: {
      TriSurface s;
      const auto v = add_polygon(s, 3);
      s.add_face(v[0], v[1], v[2]);
      return s;
    }
    case 4:
    case 5:
      return cone_dome(n);
    case 6: {
      TriSurface s;
      const auto v = add_polygon(s, 6);
      const int c = s.add_vertex(Point3::Zero());
      for (int j = 0; j < 6; ++j) s.add_face(v[j], v[(j + 1) % 6], c);
      return s;
    }
    case 8:
      return cupola_dome(4);
    case 10:
      return cupola_dome(5);
    case 12:
      return dodecagon_dome();
    default:
      fail(ErrorKind::Unsupported, "no classical dome for n = " + std::to_string(n) + "; use ngon_dome");
  }
}

void NgonPlan::check() const {
  if (n < 3) fail(ErrorKind::Precondition, "plan needs n >= 3");
  if (r < 1) fail(ErrorKind::Precondition, "plan needs r >= 1");
  if (!(theta > 0.0 && theta < kPi / 2)) fail(ErrorKind::Precondition, "tilt must lie in (0, pi/2)");
  for (int m : m_vector)
    if (m == 0) fail(ErrorKind::Precondition, "multipliers must be nonzero");
  if (!(closure_residual >= 0.0)) fail(ErrorKind::Precondition, "residual must be non-negative");
}

NgonResult ngon_dome(int n, int r, const Tolerance& tol, const NgonOptions& opt) {
  if (n < 7) fail(ErrorKind::Precondition, "ngon_dome needs n >= 7; use classical_dome");
  if (r < 1) fail(ErrorKind::Precondition, "side length must be a positive integer");
  if (!(opt.theta0 > 0.0 && opt.theta0 < kPi / 2)) fail(ErrorKind::Precondition, "theta0 must lie in (0, pi/2)");
  tol.check();

  std::string last_error = "no attempt made";
  ErrorKind last_kind = ErrorKind::Ring;
  for (int attempt = 0; attempt <= opt.max_replans; ++attempt) {
    // Jitter away from the countable set of degenerate tilts.
    const double theta0 = opt.theta0 * (1.0 + 0.061 * attempt * ((attempt % 2) ? 1 : -0.5));
    const Sector planned = simulate(n, theta0, nullptr, opt);
    if (!planned.valid) {
      last_error = planned.why;
      last_kind = ErrorKind::Ring;
      continue;
    }
    std::optional<Root> root;
    for (const auto& [m, delta] : planned.closings) {
      Sector option = planned;
      option.m.back() = m;
      option.delta = delta;
      if ((root = close_in_theta(n, theta0, option, opt))) break;
    }
    if (!root) {
      last_error = "closing offset has no sign change near theta0";
      last_kind = ErrorKind::Closure;
      continue;
    }
    const Sector& sec = root->sector;
    // The closing vertex of every sector is moved onto the axis.
    const double residual = std::abs(sec.delta);
    if (residual > 1e-9) {
      last_error = "closure residual " + std::to_string(residual);
      last_kind = ErrorKind::Closure;
      continue;
    }
    NgonResult out;
    out.surface = build_surface(sec);
    out.plan.n = n;
    out.plan.r = r;
    out.plan.theta = root->theta;
    out.plan.theta0 = theta0;
    out.plan.m_vector = sec.m;
    out.plan.tilts = sec.tilts;
    out.plan.gaps = sec.gaps;
    out.plan.rings = static_cast<int>(sec.m.size()) - 1;
    out.plan.replans = attempt;
    out.plan.closure_residual = residual;
    if (r > 1) {
      for (auto& p : out.surface.vertices) p *= r;
      out.surface = refine_by_factor(out.surface, r, tol);
    }
    return out;
  }
  fail(last_kind, "ngon_dome(" + std::to_string(n) + "): " + last_error);
}

}  // namespace domes
