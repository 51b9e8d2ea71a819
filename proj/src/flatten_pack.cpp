#include "domes/flatten_pack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

namespace domes {

namespace {

const double kSqrt3 = std::sqrt(3.0);

bool straight_at(const std::vector<Point3>& p, int i) {
  const int n = static_cast<int>(p.size());
  const Point3 d1 = p[(i + n - 1) % n] - p[i];
  const Point3 d2 = p[(i + 1) % n] - p[i];
  return d1.cross(d2).norm() <= 1e-9 * d1.norm() * d2.norm();
}

double distance_to_line(const Point3& x, const Point3& a, const Point3& b) {
  const Point3 d = (b - a).normalized();
  const Point3 r = x - a;
  return (r - r.dot(d) * d).norm();
}

bool diagonals_separated(const std::vector<Point3>& p, double sep) {
  const int n = static_cast<int>(p.size());
  std::vector<double> d2;
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      d2.push_back((p[i] - p[j]).squaredNorm());
    }
  std::sort(d2.begin(), d2.end());
  for (std::size_t i = 1; i < d2.size(); ++i)
    if (d2[i] - d2[i - 1] <= sep) return false;
  return true;
}

// Orthonormal basis of the plane orthogonal to `normal`.
std::pair<Point3, Point3> plane_basis(const Point3& normal) {
  const Point3 g = normal.normalized();
  Point3 e1 = g.unitOrthogonal();
  Point3 e2 = g.cross(e1);
  return {e1, e2};
}

void require_unit_curve(const IntegralCurve& c, const Tolerance& tol) {
  const auto report = validate_curve(c, tol);
  for (int l : c.lengths)
    if (l != 1) fail(ErrorKind::Precondition, "operation needs a curve with unit edges");
  if (!report.pass) fail(ErrorKind::Precondition, "curve edges do not have their declared lengths");
}

}  // namespace

void LinearFunctional::check() const {
  if (!(coefficients.norm() > 0.0)) fail(ErrorKind::Precondition, "linear functional must be nonzero");
}

LinearFunctional LinearFunctional::random(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  LinearFunctional f;
  do {
    f.coefficients = Point3(g(rng), g(rng), g(rng));
  } while (f.coefficients.norm() < 1e-3);
  f.coefficients.normalize();
  return f;
}

IntegralCurve perturb_generic(const IntegralCurve& c, double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0.0)) fail(ErrorKind::Precondition, "perturbation size must be positive");
  const int n = static_cast<int>(c.size());
  if (n < 3) fail(ErrorKind::Malformed, "a curve needs at least 3 vertices");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Point3> p = c.vertices;

  // Straight vertices: turn the arc after v_i rigidly about the line v_i v_j,
  // where v_j is the first later vertex off the line through v_i.
  const double repair_step = epsilon / (16.0 * n);
  int repairs = 0;
  for (bool again = true; again;) {
    again = false;
    for (int i = 0; i < n; ++i) {
      if (!straight_at(p, i)) continue;
      if (++repairs > 4 * n) fail(ErrorKind::Perturbation, "could not remove collinear triples");
      const Point3& vi = p[i];
      const Point3& vnext = p[(i + 1) % n];
      const double scale = std::max(1.0, (vnext - vi).norm());
      int j = -1;
      for (int s = 2; s <= n - 2; ++s) {
        const int cand = (i + s) % n;
        if (distance_to_line(p[cand], vi, vnext) > 1e-9 * scale) { j = cand; break; }
      }
      if (j < 0) fail(ErrorKind::Perturbation, "all vertices are collinear; no perturbation exists");
      double reach = 0.0;
      for (int s = (i + 1) % n; s != j; s = (s + 1) % n) reach = std::max(reach, distance_to_line(p[s], vi, p[j]));
      const double angle = std::min(0.1, repair_step / std::max(reach, 1e-300)) * (unit(rng) < 0 ? -1.0 : 1.0);
      const Point3 a = vi, b = p[j];
      for (int s = (i + 1) % n; s != j; s = (s + 1) % n) p[s] = rotate_about_axis(p[s], a, b, angle);
      if (straight_at(p, i))
        fail(ErrorKind::Perturbation, "epsilon too small to break a collinear triple");
      again = true;
    }
  }

  // Random turns of each vertex about its neighbours' axis keep both edge lengths.
  const double jiggle = epsilon / 4.0;
  const double sep = std::min(1e-11, epsilon * 1e-3);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Point3> q = p;
    for (int i = 0; i < n; ++i) {
      const Point3& a = q[(i + n - 1) % n];
      const Point3& b = q[(i + 1) % n];
      Point3 axis_end = b;
      if ((b - a).norm() < 1e-12) axis_end = a + (q[i] - a).unitOrthogonal();
      const double d = distance_to_line(q[i], a, axis_end);
      if (d < 1e-300) continue;
      const double angle = std::min(0.5, jiggle / d) * unit(rng);
      q[i] = rotate_about_axis(q[i], a, axis_end, angle);
    }
    bool ok = diagonals_separated(q, sep);
    for (int i = 0; ok && i < n; ++i) ok = !straight_at(q, i);
    if (ok) {
      IntegralCurve out = c;
      out.vertices = std::move(q);
      return out;
    }
  }
  fail(ErrorKind::Perturbation, "epsilon too small to reach a generic curve at working precision");
}

double functional_spread(const IntegralCurve& c, const LinearFunctional& f) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : c.vertices) {
    lo = std::min(lo, f(v));
    hi = std::max(hi, f(v));
  }
  return hi - lo;
}

namespace {

// f along the apex circle of vertex k: mid + A cos(t) + B sin(t), t = 2 m alpha.
struct ApexCircle {
  double alpha = 0.0, mid = 0.0, A = 0.0, B = 0.0;
  Point3 centre, x, dx;
  bool ok = false;

  ApexCircle(const IntegralCurve& c, int k, const LinearFunctional& f, const Tolerance& tol) {
    const int n = static_cast<int>(c.size());
    const Point3& prev = c[k + n - 1];
    const Point3& next = c[k + 1];
    const double a = (next - prev).norm();
    if (a >= kSqrt3 - 1e-12 || a < tol.geom_tol) return;
    ok = true;
    alpha = fan_angle(a);
    const Point3 d = (next - prev) / a;
    centre = 0.5 * (prev + next);
    x = c[k] - centre;
    dx = d.cross(x);
    mid = 0.5 * (f(prev) + f(next));
    A = f.coefficients.dot(x);
    B = f.coefficients.dot(dx);
  }
  double value(int m) const {
    const double t = 2.0 * m * alpha;
    return mid + A * std::cos(t) + B * std::sin(t);
  }
  Point3 point(int m) const {
    const double t = 2.0 * m * alpha;
    return centre + std::cos(t) * x + std::sin(t) * dx;
  }
};

struct Window {
  double lo, hi;  // open middle third of the neighbours' range
  double gap;     // width of the neighbours' range
};

Window window_of(const IntegralCurve& c, int k, const LinearFunctional& f) {
  const int n = static_cast<int>(c.size());
  const double p = f(c[k + n - 1]), q = f(c[k + 1]);
  const double lo = std::min(p, q), hi = std::max(p, q);
  return {lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0, hi - lo};
}

// Multiplier landing vertex k in the window. Among the first few hits the one
// leaving the chords to the next-but-one vertices shortest wins, so the
// neighbours stay flippable.
int pick_multiplier(const IntegralCurve& c, int k, const ApexCircle& circle, const Window& w, int max_m) {
  const int n = static_cast<int>(c.size());
  const Point3& left = c[k + n - 2];
  const Point3& right = c[k + 2];
  constexpr int kHits = 24;
  constexpr double kEnough = 0.05;
  int best = 0, hits = 0;
  double best_slack = -std::numeric_limits<double>::infinity();
  for (int m = 1; m <= max_m && hits < kHits; ++m)
    for (int s : {1, -1}) {
      const double v = circle.value(s * m);
      if (!(v > w.lo && v < w.hi)) continue;
      ++hits;
      const Point3 p = circle.point(s * m);
      const double slack = kSqrt3 - std::max((p - left).norm(), (p - right).norm());
      if (slack > best_slack) {
        best_slack = slack;
        best = s * m;
      }
      if (best_slack > kEnough) return best;
    }
  return best;
}

// Called when a full sweep moved nothing: every vertex outside its window
// either has neighbours at least sqrt(3) apart or a window too narrow for
// the multiplier budget. A neighbour j of such a vertex is turned instead,
// staying within the current f-range of the curve (so the spread cannot
// grow), to shorten the blocked axis or widen the narrow window.
FlipStep unblocking_flip(const IntegralCurve& c, const LinearFunctional& f, int max_m,
                         const Tolerance& tol) {
  const int n = static_cast<int>(c.size());
  const int scan = max_m;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : c.vertices) {
    lo = std::min(lo, f(v));
    hi = std::max(hi, f(v));
  }
  for (int k = 0; k < n; ++k) {
    const Window wk = window_of(c, k, f);
    const double value = f(c[k]);
    if (value > wk.lo && value < wk.hi) continue;
    const bool axis_blocked = (c[k + 1] - c[k + n - 1]).norm() >= kSqrt3 - 1e-12;
    for (int j : {(k + 1) % n, (k + n - 1) % n}) {
      const ApexCircle circle(c, j, f, tol);
      if (!circle.ok) continue;
      const Point3& other = j == (k + 1) % n ? c[k + n - 1] : c[k + 1];
      // Prefer landing j inside its own window so the contraction goes on;
      // fall back to anywhere in the current range.
      const Window wj = window_of(c, j, f);
      for (auto [from, to] : {std::pair{wj.lo, wj.hi}, std::pair{lo, hi}}) {
        int best = 0;
        double best_gap = axis_blocked ? -1.0 : 2.0 * wk.gap;
        for (int m = 1; m <= scan; ++m)
          for (int s : {1, -1}) {
            const double v = circle.value(s * m);
            if (v < from || v > to) continue;
            const Point3 p = circle.point(s * m);
            if (axis_blocked && (p - other).norm() >= kSqrt3 - 1e-3) continue;
            const double gap = std::abs(v - f(other));
            if (gap > best_gap) {
              best_gap = gap;
              best = s * m;
            }
          }
        if (best != 0) return {j + 1, best};
      }
    }
  }
  fail(ErrorKind::Stall, "planarization stalled: no vertex can be moved towards the plane");
}

}  // namespace

PlanarizeResult planarize(const IntegralCurve& c, const LinearFunctional& f,
                          const PlanarizeOptions& opt, const Tolerance& tol) {
  require_unit_curve(c, tol);
  f.check();
  if (!(opt.spread_target > 0.0)) fail(ErrorKind::Precondition, "spread target must be positive");
  const int n = static_cast<int>(c.size());
  PlanarizeResult res;
  res.curve = c;
  res.spread = functional_spread(c, f);
  long long flips = 0;
  int idle = 0;
  double best_spread = res.spread;
  long long since_progress = 0;
  auto apply = [&](const FlipStep& step) {
    if (flips >= opt.max_flips) {
      std::ostringstream os;
      os << "planarization exceeded " << opt.max_flips << " flips at spread " << res.spread;
      fail(ErrorKind::Stall, os.str());
    }
    res.curve = flip_curve(res.curve, step, tol);
    res.plan.steps.push_back(step);
    ++flips;
    idle = 0;
    res.spread = functional_spread(res.curve, f);
    if (res.spread < best_spread * (1.0 - 1e-9)) {
      best_spread = res.spread;
      since_progress = 0;
    } else if (++since_progress > 50LL * n + 200) {
      std::ostringstream os;
      os << "planarization stopped making progress at spread " << res.spread;
      fail(ErrorKind::Stall, os.str());
    }
  };
  for (int k = 0; res.spread >= opt.spread_target; k = (k + 1) % n) {
    const Window w = window_of(res.curve, k, f);
    const double value = f(res.curve[k]);
    int chosen = 0;
    if (!(value > w.lo && value < w.hi)) {
      const ApexCircle circle(res.curve, k, f, tol);
      if (circle.ok) chosen = pick_multiplier(res.curve, k, circle, w, opt.max_multiplier);
    }
    if (chosen != 0) {
      apply({k + 1, chosen});
    } else if (++idle >= n) {
      apply(unblocking_flip(res.curve, f, opt.max_multiplier, tol));
    }
  }
  return res;
}

void PackingConfig::check() const {
  if (!(bound > std::sqrt(1.25)) || !(bound < kSqrt3))
    fail(ErrorKind::Precondition, "packing bound must lie in (sqrt(5/4), sqrt(3))");
  if (exact_n_max < 0) fail(ErrorKind::Precondition, "exact_n_max must be non-negative");
}

double max_prefix_norm(std::span<const Vec2> u, std::span<const int> order) {
  Vec2 s = Vec2::Zero();
  double m = 0.0;
  for (int i : order) {
    s += u[i];
    m = std::max(m, s.norm());
  }
  return m;
}

namespace {

struct Search {
  std::span<const Vec2> u;
  const PackingConfig& cfg;
  std::vector<std::vector<int>> before;  // before[j]: indices that must precede j
  std::vector<char> used;
  std::vector<int> order;
  std::vector<int> best;
  double best_value = std::numeric_limits<double>::infinity();
  long long nodes = 0;
  bool exhaustive = true;

  bool placeable(int j) const {
    if (used[j]) return false;
    for (int i : before[j])
      if (!used[i]) return false;
    return true;
  }

  bool leaf_ok() const { return !cfg.accept || cfg.accept(order, u); }

  void exact(const Vec2& prefix, double cur) {
    if (order.size() == u.size()) {
      if (cur < best_value - 1e-12 && leaf_ok()) {
        best_value = cur;
        best = order;
      }
      return;
    }
    for (int j = 0; j < static_cast<int>(u.size()); ++j) {
      if (!placeable(j)) continue;
      const Vec2 next = prefix + u[j];
      const double m = std::max(cur, next.norm());
      if (m >= best_value - 1e-12) continue;
      used[j] = 1;
      order.push_back(j);
      exact(next, m);
      order.pop_back();
      used[j] = 0;
    }
  }

  // Depth-first under the bound, closest partial sums first.
  bool greedy(const Vec2& prefix, double cur) {
    if (order.size() == u.size()) {
      if (!leaf_ok()) return false;
      best_value = cur;
      best = order;
      return true;
    }
    if (++nodes > cfg.heuristic_nodes) return false;
    std::vector<std::pair<double, int>> children;
    for (int j = 0; j < static_cast<int>(u.size()); ++j) {
      if (!placeable(j)) continue;
      const double m = (prefix + u[j]).norm();
      if (m <= cfg.bound) children.emplace_back(m, j);
    }
    std::sort(children.begin(), children.end());
    for (auto [m, j] : children) {
      used[j] = 1;
      order.push_back(j);
      const bool done = greedy(prefix + u[j], std::max(cur, m));
      order.pop_back();
      used[j] = 0;
      if (done) return true;
      if (nodes > cfg.heuristic_nodes) return false;
    }
    return false;
  }
};

}  // namespace

SteinitzResult steinitz_permutation(std::span<const Vec2> u, const PackingConfig& cfg, double sum_tol) {
  cfg.check();
  Vec2 total = Vec2::Zero();
  for (const auto& x : u) {
    if (std::abs(x.norm() - 1.0) > 1e-9) fail(ErrorKind::Precondition, "Steinitz input vectors must be unit");
    total += x;
  }
  if (total.norm() > sum_tol) fail(ErrorKind::Precondition, "Steinitz input vectors must sum to zero");
  const int n = static_cast<int>(u.size());
  Search s{u, cfg, std::vector<std::vector<int>>(n), std::vector<char>(n, 0), {}, {}};
  for (auto [i, j] : cfg.keep_order) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      fail(ErrorKind::Precondition, "ordering constraint index out of range");
    s.before[j].push_back(i);
  }
  SteinitzResult r;
  if (n <= cfg.exact_n_max) {
    s.exact(Vec2::Zero(), 0.0);
    r.exhaustive = true;
  } else {
    s.greedy(Vec2::Zero(), 0.0);
  }
  if (s.best.size() != u.size() && n > 0)
    fail(ErrorKind::Packing, "no admissible order of the edge directions was found");
  r.order = s.best;
  r.max_prefix = n == 0 ? 0.0 : s.best_value;
  if (r.max_prefix > cfg.bound) {
    std::ostringstream os;
    os << "best order has prefix norm " << r.max_prefix << " above the bound " << cfg.bound;
    fail(ErrorKind::Packing, os.str());
  }
  return r;
}

std::vector<int> adjacent_factorization(std::span<const int> order) {
  const int n = static_cast<int>(order.size());
  std::vector<char> seen(n, 0);
  for (int x : order) {
    if (x < 0 || x >= n || seen[x]) fail(ErrorKind::Precondition, "input is not a permutation");
    seen[x] = 1;
  }
  std::vector<int> arr(n);
  for (int i = 0; i < n; ++i) arr[i] = i;
  std::vector<int> swaps;
  for (int i = 0; i < n; ++i) {
    int p = static_cast<int>(std::find(arr.begin() + i, arr.end(), order[i]) - arr.begin());
    for (; p > i; --p) {
      std::swap(arr[p - 1], arr[p]);
      swaps.push_back(p);  // positions p and p+1, 1-based
    }
  }
  return swaps;
}

std::int64_t inversion_count(std::span<const int> order) {
  std::int64_t inv = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      if (order[i] > order[j]) ++inv;
  return inv;
}

PackResult pack_curve(const IntegralCurve& c, const LinearFunctional& f, const PackingConfig& cfg,
                      const PackOptions& opt, const Tolerance& tol) {
  require_unit_curve(c, tol);
  cfg.check();
  const int n = static_cast<int>(c.size());
  PlanarizeResult pl = planarize(c, f, opt.planarize, tol);

  const auto [e1, e2] = plane_basis(f.coefficients);
  std::vector<Vec2> u(n);
  for (int i = 0; i < n; ++i) {
    const Point3 e = pl.curve[i + 1] - pl.curve[i];
    const Vec2 p(e.dot(e1), e.dot(e2));
    if (p.norm() < 0.5) fail(ErrorKind::Packing, "curve is too far from planar to order its edges");
    u[i] = p.normalized();
  }
  PackingConfig local = cfg;
  // Pairs that cannot be exchanged by a single flip keep their order.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double axis = (u[i] + u[j]).norm();
      if (axis >= kSqrt3 - 1e-2 || axis <= 1e-3) local.keep_order.emplace_back(i, j);
    }
  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  double radius = 0.0;
  for (int i = 1; i < n; ++i) radius = std::max(radius, (pl.curve[i] - pl.curve[0]).norm());
  const bool keep = radius <= cfg.bound && (!cfg.accept || cfg.accept(identity, u));
  const SteinitzResult st =
      keep ? SteinitzResult{identity, radius, false}
           : steinitz_permutation(u, local, 1e-9 + n * (4.0 * pl.spread * pl.spread + 1e-12));

  PackResult res;
  res.curve = pl.curve;
  res.plan = pl.plan;
  res.planarize_steps = pl.plan.steps.size();
  res.order = st.order;
  for (int k : adjacent_factorization(st.order)) {
    const int vertex = k + 1;  // shared vertex of edges k and k+1 (1-based)
    const double a = (res.curve[vertex] - res.curve[vertex - 2]).norm();
    const double alpha = fan_angle(a);
    int best_m = 1;
    double best_err = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= opt.max_multiplier; ++m) {
      const double err = std::abs(std::remainder(2.0 * m * alpha - std::numbers::pi, 2.0 * std::numbers::pi));
      if (err < best_err) {
        best_err = err;
        best_m = m;
        if (err <= opt.angle_tol) break;
      }
    }
    const FlipStep step{vertex, best_m};
    res.curve = flip_curve(res.curve, step, tol);
    res.plan.steps.push_back(step);
  }
  for (int i = 1; i < n; ++i) res.max_radius = std::max(res.max_radius, (res.curve[i] - res.curve[0]).norm());
  if (res.max_radius > cfg.bound + 1e-9) {
    std::ostringstream os;
    os << "packed curve reaches " << res.max_radius << " from its first vertex, above " << cfg.bound;
    fail(ErrorKind::Packing, os.str());
  }
  return res;
}

}  // namespace domes
