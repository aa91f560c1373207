#pragma once

// Fixed, deterministic test instances with known optimal values. Shared by
// the benchmark suites, the acceptance runner and the unit tests.

#include <optional>
#include <string>
#include <vector>

#include "altmin/cbcg.hpp"
#include "altmin/oracles.hpp"

namespace altmin {

/// Two sets with dist(P, Q) known analytically or from hull_distance.
struct PairInstance {
  std::string name;
  OracleSet p;
  OracleSet q;
  double distance;
  /// Closest points (x* in P, y* in Q) when unique and known.
  std::optional<Vector> x_star;
  std::optional<Vector> y_star;

  bool intersecting() const { return distance == 0.0; }
  /// D_P^2 + D_Q^2.
  double diameter_sq() const;
};

/// At least 12 pairs: intersecting and disjoint, over box, ball, simplex,
/// l1-ball and V-polytope geometries.
std::vector<PairInstance> pair_suite();

/// A block problem with a known optimal value f*.
struct BlockInstance {
  std::string name;
  BlockProblem problem;
  std::vector<Vector> start;
  double fstar;
};

/// Quadratic problems with k = 1, 2 and 3 blocks.
std::vector<BlockInstance> block_suite();

/// Projection-friendly pair with a start y0 and dist(y0, Q_min) (disjoint) or
/// dist(y0, P ∩ Q) (intersecting) known analytically.
struct PocsInstance {
  std::string name;
  OracleSet p;
  OracleSet q;
  Vector y0;
  /// y* - x*; absent when the sets intersect.
  std::optional<Vector> distance_vector;
  double dist_y0;
  /// dist(P, Q).
  double distance;
  /// A point of Q_min (disjoint case).
  std::optional<Vector> q_min_point;
};

std::vector<PocsInstance> pocs_suite();

/// Intersecting V-polytope pairs, small enough (<= 8 vertices in total) for
/// an exhaustive epsilon_pq.
std::vector<PairInstance> adaptive_suite();

}  // namespace altmin
