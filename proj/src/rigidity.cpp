#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "domes/periodic.hpp"

namespace domes {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Bar framework over 3D blocks. Point blocks move under translations; the
// others (periods) only rotate. Every bar vector is a signed sum of blocks.
struct Framework {
  std::vector<bool> is_point;
  std::vector<std::vector<std::pair<int, double>>> bars;

  int unknowns() const { return 3 * static_cast<int>(is_point.size()); }

  Point3 bar(const VectorXd& x, std::size_t k) const {
    Point3 e = Point3::Zero();
    for (auto [b, c] : bars[k]) e += c * x.segment<3>(3 * b);
    return e;
  }

  MatrixXd jacobian(const VectorXd& x) const {
    MatrixXd j = MatrixXd::Zero(static_cast<Eigen::Index>(bars.size()), unknowns());
    for (std::size_t k = 0; k < bars.size(); ++k) {
      const Point3 e = bar(x, k);
      for (auto [b, c] : bars[k]) j.block<1, 3>(static_cast<Eigen::Index>(k), 3 * b) += c * e.transpose();
    }
    return j;
  }

  VectorXd squared(const VectorXd& x) const {
    VectorXd r(static_cast<Eigen::Index>(bars.size()));
    for (std::size_t k = 0; k < bars.size(); ++k) r[static_cast<Eigen::Index>(k)] = bar(x, k).squaredNorm();
    return r;
  }

  MatrixXd trivial(const VectorXd& x) const {
    MatrixXd t = MatrixXd::Zero(unknowns(), 6);
    for (std::size_t b = 0; b < is_point.size(); ++b) {
      const Eigen::Index r = 3 * static_cast<Eigen::Index>(b);
      if (is_point[b]) t.block<3, 3>(r, 0).setIdentity();
      const Point3 p = x.segment<3>(r);
      for (int k = 0; k < 3; ++k) t.block<3, 1>(r, 3 + k) = Point3::Unit(k).cross(p);
    }
    return t;
  }
};

int numeric_rank(const VectorXd& sv, double rel) {
  if (sv.size() == 0) return 0;
  const double cut = rel * std::max(sv[0], 1e-300);
  int r = 0;
  while (r < sv.size() && sv[r] > cut) ++r;
  return r;
}

// Orthonormal basis of the column space.
MatrixXd column_basis(const MatrixXd& m, double rel) {
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU);
  const int r = numeric_rank(svd.singularValues(), rel);
  return svd.matrixU().leftCols(r);
}

// Step along `dir`, then pull back onto the constraint set with least-norm corrections.
bool follow(const Framework& fw, const VectorXd& x0, const VectorXd& dir, double h, const MatrixXd& trivial_basis) {
  const VectorXd target = fw.squared(x0);
  VectorXd x = x0 + h * dir;
  for (int it = 0; it < 40; ++it) {
    const VectorXd r = fw.squared(x) - target;
    if (r.cwiseAbs().maxCoeff() < 1e-13) break;
    const MatrixXd j = 2.0 * fw.jacobian(x);
    x -= j.completeOrthogonalDecomposition().solve(r);
  }
  if ((fw.squared(x) - target).cwiseAbs().maxCoeff() > 1e-10) return false;
  VectorXd d = x - x0;
  d -= trivial_basis * (trivial_basis.transpose() * d);
  return d.norm() >= 0.5 * h;
}

FlexReport analyse(const Framework& fw, const VectorXd& x, const Tolerance& tol, const FlexOptions& opt,
                   bool coplanar) {
  FlexReport rep;
  rep.coplanar = coplanar;
  const MatrixXd j = fw.jacobian(x);
  const int n = fw.unknowns();
  const bool full_v = opt.path_following;
  Eigen::JacobiSVD<MatrixXd> svd;
  svd.compute(j, full_v ? Eigen::ComputeFullV : 0);
  const VectorXd sv = svd.singularValues();
  rep.singular_values.assign(sv.data(), sv.data() + sv.size());
  const int rank = numeric_rank(sv, tol.rank_tol);
  rep.kernel_dim = n - rank;
  rep.gap_ratio = rank < sv.size() && sv[rank] > 0 ? sv[rank - 1] / sv[rank]
                                                  : std::numeric_limits<double>::infinity();
  const MatrixXd triv = column_basis(fw.trivial(x), 1e-9);
  rep.removed_modes = static_cast<int>(triv.cols());
  rep.infinitesimal_dim = std::max(0, rep.kernel_dim - rep.removed_modes);

  if (opt.path_following) {
    // Kernel directions orthogonal to the trivial motions.
    MatrixXd kernel = svd.matrixV().rightCols(rep.kernel_dim);
    kernel -= triv * (triv.transpose() * kernel);
    const MatrixXd flex = column_basis(kernel, 1e-6);
    int confirmed = 0;
    for (Eigen::Index c = 0; c < flex.cols(); ++c)
      if (follow(fw, x, flex.col(c), opt.step, triv)) ++confirmed;
    rep.finite_flex_confirmed = confirmed;
  }
  return rep;
}

bool points_coplanar(const std::vector<Point3>& pts, const std::vector<Point3>& directions) {
  if (pts.size() < 3 && directions.empty()) return true;
  Point3 c = Point3::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(std::max<std::size_t>(1, pts.size()));
  MatrixXd m(3, static_cast<Eigen::Index>(pts.size() + directions.size()));
  Eigen::Index k = 0;
  for (const auto& p : pts) m.col(k++) = p - c;
  for (const auto& d : directions) m.col(k++) = d;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const VectorXd s = svd.singularValues();
  return s[2] <= 1e-9 * std::max(1.0, s[0]);
}

}  // namespace

FlexReport flex_dimension(const TriSurface& s, const Tolerance& tol, const FlexOptions& opt) {
  tol.check();
  Framework fw;
  fw.is_point.assign(s.vertices.size(), true);
  for (auto [a, b] : edges_of(s)) fw.bars.push_back({{a, 1.0}, {b, -1.0}});
  VectorXd x(fw.unknowns());
  for (std::size_t i = 0; i < s.vertices.size(); ++i) x.segment<3>(3 * static_cast<Eigen::Index>(i)) = s.vertices[i];
  return analyse(fw, x, tol, opt, points_coplanar(s.vertices, {}));
}

FlexReport periodic_flex_dimension(const PeriodicSurface& p, const Tolerance& tol, const FlexOptions& opt) {
  tol.check();
  const int n = static_cast<int>(p.orbit_vertices.size());
  Framework fw;
  fw.is_point.assign(n, true);
  fw.is_point.push_back(false);  // alpha
  fw.is_point.push_back(false);  // beta
  for (const auto& [u, v] : edge_orbits(p)) {
    std::vector<std::pair<int, double>> bar{{v.vertex, 1.0}, {u.vertex, -1.0}};
    if (v.p != 0) bar.push_back({n, double(v.p)});
    if (v.q != 0) bar.push_back({n + 1, double(v.q)});
    fw.bars.push_back(bar);
  }
  VectorXd x(fw.unknowns());
  for (int i = 0; i < n; ++i) x.segment<3>(3 * i) = p.orbit_vertices[i];
  x.segment<3>(3 * n) = p.alpha;
  x.segment<3>(3 * n + 3) = p.beta;
  return analyse(fw, x, tol, opt, points_coplanar(p.orbit_vertices, {p.alpha, p.beta}));
}

}  // namespace domes
