#pragma once

// Linear feasibility over pairs of point lists:
//
//   sum_u lambda_u u = sum_v kappa_v v,  sum lambda = sum kappa = 1,  lambda, kappa >= 0
//
// i.e. "do conv(U) and conv(V) intersect, and where". Solved with a dense
// two-phase simplex (phase 1 only) under Bland's rule, followed by a
// least-squares polish of the basic solution.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "altmin/oracles.hpp"

namespace altmin {

/// Phase-1 objective at or below this counts as feasible.
inline constexpr double kPhaseOneTolerance = 1e-9;
/// Tolerance at which a point counts as a member of a hull.
inline constexpr double kMembershipTolerance = 1e-7;

class FeasibilityProgram {
 public:
  /// Throws InvalidArgument on empty lists, DimensionError on mixed dimensions.
  FeasibilityProgram(std::vector<Vector> u, std::vector<Vector> v);

  Eigen::Index dimension() const { return dimension_; }
  /// Deduplicated candidate points.
  const std::vector<Vector>& u() const { return u_; }
  const std::vector<Vector>& v() const { return v_; }
  /// Position in the deduplicated list for each caller-supplied point.
  const std::vector<std::size_t>& u_index() const { return u_index_; }
  const std::vector<std::size_t>& v_index() const { return v_index_; }
  std::size_t input_u_size() const { return u_index_.size(); }
  std::size_t input_v_size() const { return v_index_.size(); }

 private:
  Eigen::Index dimension_;
  std::vector<Vector> u_, v_;
  std::vector<std::size_t> u_index_, v_index_;
};

struct FeasibilityWeights {
  /// Indexed like the caller's input lists; merged duplicates carry 0.
  std::vector<double> lambda;
  std::vector<double> kappa;
  /// sum lambda_u u.
  Vector point;
  /// max-norm of the unscaled equality residual.
  double residual;
};

struct FeasibilityReport {
  bool feasible;
  double phase_one_objective;
  std::size_t pivots;
  std::optional<FeasibilityWeights> weights;
};

FeasibilityReport solve_feasibility_detailed(const FeasibilityProgram& program);

/// Weights when conv(U) and conv(V) intersect, nullopt otherwise.
std::optional<FeasibilityWeights> solve_feasibility(const FeasibilityProgram& program);
std::optional<FeasibilityWeights> solve_feasibility(std::span<const Vector> u,
                                                    std::span<const Vector> v);

/// dist(conv(A), conv(B)); exactly 0 when the hulls intersect.
double hull_distance(std::span<const Vector> a, std::span<const Vector> b);

/// Max total vertex count accepted by epsilon_pq (the enumeration is 2^|P| * 2^|Q|).
inline constexpr std::size_t kEpsilonMaxVertices = 16;

struct EpsilonPQ {
  /// +infinity when no subset pair has disjoint hulls.
  double value = std::numeric_limits<double>::infinity();
  std::size_t pairs = 0;
  std::size_t disjoint_pairs = 0;

  bool finite() const { return value < std::numeric_limits<double>::infinity(); }
};

/// Smallest positive distance between disjoint hulls of vertex subsets.
/// Both sets must be V-polytopes. Subset pairs are evaluated in parallel.
EpsilonPQ epsilon_pq(const OracleSet& p, const OracleSet& q);
/// Same enumeration, single-threaded.
EpsilonPQ epsilon_pq_serial(const OracleSet& p, const OracleSet& q);

/// point in conv(vertices), at kMembershipTolerance.
bool membership(const Vector& point, std::span<const Vector> vertices);

/// Membership in any geometry: analytic where possible, LP for V-polytopes.
bool contains(const OracleSet& set, const Vector& x, double tol);

/// Barycentric weights of x over the vertices of a V-polytope.
std::optional<std::vector<double>> barycentric_weights(const OracleSet& set, const Vector& x);

std::vector<Vector> columns(const Matrix& m);

}  // namespace altmin
