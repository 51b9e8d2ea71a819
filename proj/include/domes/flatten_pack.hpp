#pragma once

// Generic perturbation, planarization by flips and packing by reordering
// edge directions.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "domes/geom.hpp"
#include "domes/rhombus.hpp"

namespace domes {

using Vec2 = Eigen::Vector2d;

/// x -> coefficients . x + offset
struct LinearFunctional {
  Point3 coefficients = Point3::UnitZ();
  double offset = 0.0;

  double operator()(const Point3& p) const { return coefficients.dot(p) + offset; }
  void check() const;
  /// A random unit-direction functional; deterministic in the seed.
  static LinearFunctional random(std::uint64_t seed);
};

/// Curve with the same declared lengths, every vertex moved by less than
/// `epsilon`, no three consecutive vertices collinear and all squared
/// diagonals separated.
IntegralCurve perturb_generic(const IntegralCurve& c, double epsilon, std::uint64_t seed);

struct PlanarizeOptions {
  double spread_target = 1e-3;
  long long max_flips = 1000000;
  int max_multiplier = 100000;
};

struct PlanarizeResult {
  IntegralCurve curve;
  FlipPlan plan;
  double spread = 0.0;
};

/// Spread of f over the curve vertices.
double functional_spread(const IntegralCurve& c, const LinearFunctional& f);

PlanarizeResult planarize(const IntegralCurve& c, const LinearFunctional& f,
                          const PlanarizeOptions& opt = {}, const Tolerance& tol = {});

struct PackingConfig {
  double bound = 1.5;
  int exact_n_max = 10;
  /// Node budget of the search used above exact_n_max.
  long long heuristic_nodes = 2000000;
  /// Optional filter on complete orders (indices into u); rejected orders are skipped.
  std::function<bool(std::span<const int> order, std::span<const Vec2> u)> accept;
  /// Pairs (i, j), i before j in the input, whose relative order must be kept.
  std::vector<std::pair<int, int>> keep_order;

  void check() const;
};

struct SteinitzResult {
  std::vector<int> order;  // order[i] = index of the vector placed i-th
  double max_prefix = 0.0;
  bool exhaustive = false;
};

/// Minimax prefix-norm order of planar vectors summing to (nearly) zero.
SteinitzResult steinitz_permutation(std::span<const Vec2> u, const PackingConfig& cfg = {},
                                    double sum_tol = 1e-9);

/// Largest prefix-sum norm of u taken in `order`.
double max_prefix_norm(std::span<const Vec2> u, std::span<const int> order);

/// Adjacent swaps turning the identity arrangement into `order`. Each entry
/// k (1-based) swaps positions k and k+1; the count is the inversion number.
std::vector<int> adjacent_factorization(std::span<const int> order);

std::int64_t inversion_count(std::span<const int> order);

struct PackOptions {
  PlanarizeOptions planarize{0.02};  // loose: the prefix bound leaves a wide margin
  int max_multiplier = 100000;
  double angle_tol = 1e-3;  // accepted error of a half turn
};

struct PackResult {
  IntegralCurve curve;
  FlipPlan plan;            // planarization steps followed by the reordering flips
  std::size_t planarize_steps = 0;
  std::vector<int> order;
  double max_radius = 0.0;  // max_i |v_1 v_i|
};

/// Flip-connects a unit curve to one with max_i |v_1 v_i| <= cfg.bound.
PackResult pack_curve(const IntegralCurve& c, const LinearFunctional& f, const PackingConfig& cfg = {},
                      const PackOptions& opt = {}, const Tolerance& tol = {});

}  // namespace domes
