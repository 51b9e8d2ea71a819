#include <algorithm>
#include <cmath>

#include "domes/periodic.hpp"

namespace domes {

namespace {

struct Block2 {
  // The block glued to its point reflection through the centre of f2.
  std::vector<Point3> points;
  std::vector<Face> faces;
  std::array<int, 3> port{};  // octahedron face 0 of the original block, kept open for the connector
  Point3 period;
};

Block2 double_block(const FlexibleBlock& f) {
  Block2 b;
  const Point3 c2 = f.centre(f.f2);
  const int n = static_cast<int>(f.surface.vertices.size());
  b.points = f.surface.vertices;
  for (const Point3& x : f.surface.vertices) b.points.push_back(2.0 * c2 - x);
  const Face port_face = octahedron_faces()[0];
  auto is_port = [&](const Face& g) {
    std::array<int, 3> x{g[0], g[1], g[2]}, y{port_face[0], port_face[1], port_face[2]};
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
  };
  for (const Face& g : f.surface.faces) {
    if (!is_port(g)) b.faces.push_back(g);
    b.faces.push_back({g[0] + n, g[1] + n, g[2] + n});
  }
  b.port = {port_face[0], port_face[1], port_face[2]};
  b.period = 2.0 * (f.centre(f.f1) - c2);
  return b;
}

std::array<Point3, 3> corners(const std::vector<Point3>& pts, const std::array<int, 3>& f) {
  return {pts[f[0]], pts[f[1]], pts[f[2]]};
}

}  // namespace

Point3 FlexibleBlock::centre(const std::array<int, 4>& f) const {
  Point3 c = Point3::Zero();
  for (int i : f) c += surface.vertices[i];
  return c / 4.0;
}

double FlexibleBlock::axis_length() const { return (centre(f1) - centre(f2)).norm(); }

FlexibleBlock flexible_block(const BricardParams& params, double t, int face_1, int face_2) {
  if (face_1 == face_2 || face_1 < 1 || face_1 > 7 || face_2 < 1 || face_2 > 7)
    fail(ErrorKind::Config, "pyramid faces must be two distinct octahedron faces other than face 0");
  const BricardOctahedron oct = bricard_octahedron(params, t);
  const auto faces = octahedron_faces();
  FlexibleBlock b;
  b.surface.unit_flag = false;
  b.surface.vertices = oct.surface.vertices;
  Point3 centroid = Point3::Zero();
  for (const Point3& p : oct.surface.vertices) centroid += p;
  centroid /= 6.0;
  for (int i = 0; i < 8; ++i)
    if (i != face_1 && i != face_2) b.surface.faces.push_back(faces[i]);

  // Pyramid with apex X over the square erected on edge Y Z, pointing away from the octahedron.
  auto pyramid = [&](const Face& f, std::array<int, 4>& base) {
    const int x = f[0], y = f[1], z = f[2];
    const Point3 &px = b.surface.vertices[x], &py = b.surface.vertices[y], &pz = b.surface.vertices[z];
    Point3 normal = (py - px).cross(pz - px).normalized();
    if (normal.dot((px + py + pz) / 3.0 - centroid) < 0) normal = -normal;
    const Point3 e = (pz - py).norm() * normal;
    const int w = b.surface.add_vertex(pz + e);
    const int v = b.surface.add_vertex(py + e);
    b.surface.add_face(x, y, v);
    b.surface.add_face(x, v, w);
    b.surface.add_face(x, w, z);
    base = {y, z, w, v};
  };
  pyramid(faces[face_1], b.f1);
  pyramid(faces[face_2], b.f2);
  orient_consistently(b.surface);
  return b;
}

AccordionResult build_accordion(const AccordionConfig& cfg) {
  if (!cfg.with_connector)
    fail(ErrorKind::Precondition, "a single chain has one period only; the connector supplies the second");
  AccordionResult out;
  out.block = flexible_block(cfg.block, cfg.t_first, cfg.pyramid_face_1, cfg.pyramid_face_2);

  const double dt = 1e-5;
  const double up = flexible_block(cfg.block, cfg.t_first + dt, cfg.pyramid_face_1, cfg.pyramid_face_2).axis_length();
  const double down = flexible_block(cfg.block, cfg.t_first - dt, cfg.pyramid_face_1, cfg.pyramid_face_2).axis_length();
  out.axis_rate = (up - down) / (2 * dt);
  if (std::abs(out.axis_rate) < 1e-6)
    fail(ErrorKind::Config, "axis length does not change under the flex; choose other pyramid faces");

  const Block2 first = double_block(out.block);
  const Block2 second = double_block(
      flexible_block(cfg.block, cfg.t_second, cfg.pyramid_face_1, cfg.pyramid_face_2));
  const BricardOctahedron conn = bricard_octahedron(cfg.connector, cfg.t_connector);
  const auto of = octahedron_faces();
  const std::array<int, 3> g1{0, 2, 4}, g2{1, 3, 5};  // a1 b1 c1 and its half-turn image

  // Connector onto the first chain, second chain onto the connector.
  const auto port1 = corners(first.points, first.port);
  const auto hg1 = corners(conn.surface.vertices, g1);
  for (int i = 0; i < 3; ++i) {
    const double a = (hg1[i] - hg1[(i + 1) % 3]).norm(), b = (port1[i] - port1[(i + 1) % 3]).norm();
    if (std::abs(a - b) > 1e-9) fail(ErrorKind::Config, "connector faces are not congruent to the block port");
  }
  const RigidMotion to_first = best_fit_motion(hg1, port1);
  std::vector<Point3> hpts;
  for (const Point3& p : conn.surface.vertices) hpts.push_back(to_first.apply(p));
  const RigidMotion to_conn = best_fit_motion(corners(second.points, second.port), corners(hpts, g2));

  std::vector<Point3> pts = first.points;
  std::vector<Face> faces = first.faces;
  auto add = [&](const std::vector<Point3>& p, const std::vector<Face>& f, const RigidMotion* m) {
    const int base = static_cast<int>(pts.size());
    for (const Point3& x : p) pts.push_back(m ? m->apply(x) : x);
    for (const Face& g : f) faces.push_back({g[0] + base, g[1] + base, g[2] + base});
  };
  std::vector<Face> conn_faces;
  for (int i = 1; i < 7; ++i) conn_faces.push_back(of[i]);  // faces 0 and 7 are glued
  add(hpts, conn_faces, nullptr);
  add(second.points, second.faces, &to_conn);

  const Point3 alpha = first.period;
  const Point3 beta = to_conn.rotation * second.period;
  out.sigma = std::acos(std::clamp(alpha.normalized().dot(beta.normalized()), -1.0, 1.0));
  out.surface = quotient_of(pts, faces, alpha, beta);
  out.surface.unit_flag = false;
  return out;
}

}  // namespace domes
