#pragma once

// Alternating linear minimizations for two compact convex sets P and Q.
//
// Each iteration makes one LMO call per set:
//   u_t     = argmin_{x in P} <x_t - y_t, x>,      x_{t+1} = x_t + g1 (u_t - x_t)
//   v_t     = argmin_{y in Q} <y_t - x_{t+1}, y>,  y_{t+1} = y_t + g2 (v_t - y_t)
// This is the two-block cyclic CG on f(x, y) = ||x - y||^2, so the trace it
// produces matches cbcg_run on squared_distance_problem row for row.
//
// Besides the iterates, the solver keeps every point the LMOs returned
// ("seen" points) with barycentric weights of x_t and y_t over them. For
// polytopes a feasibility LP over the seen points recovers an exact point of
// P ∩ Q once ||x_t - y_t|| drops below the separation constant of the pair.

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "altmin/cbcg.hpp"
#include "altmin/oracles.hpp"

namespace altmin {

/// ||x_t - y_t|| at or below this counts as contact.
inline constexpr double kContactDistance = 1e-12;

inline constexpr double kOnePlusTwoSqrtTwo = 3.8284271247461903;  // 1 + 2 sqrt(2)

/// Points returned by an LMO (plus the start point), deduplicated by exact
/// coordinates, with the current iterate's barycentric weights over them.
class SeenSet {
 public:
  /// Index of p, inserting it if new.
  std::size_t insert(const Vector& p);
  /// w <- (1 - gamma) w + gamma e_index.
  void blend(double gamma, std::size_t index);

  const std::vector<Vector>& points() const { return points_; }
  std::vector<double> weights() const;
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Vector> points_;
  std::map<std::vector<double>, std::size_t> lookup_;
  // True weights are raw_ * scale_; lazily scaled so blend() is O(1).
  std::vector<double> raw_;
  double scale_ = 1.0;
};

struct AlmState {
  Vector x;
  Vector y;
  std::size_t t = 0;
  SeenSet seen_p;
  SeenSet seen_q;
  std::size_t lmo_calls = 0;

  double distance() const { return (x - y).norm(); }
};

struct AlmRow {
  std::size_t t;
  double distance_sq;
  /// ||x_t - y_t||^2 - min_{x in P, y in Q} <x_t - y_t, x - y>.
  std::optional<double> dual;
  /// dist(z_t, P), dist(z_t, Q) for z_t = (x_t + y_t) / 2 when both sets project.
  std::optional<double> midpoint_dist_p;
  std::optional<double> midpoint_dist_q;
  std::size_t lmo_calls;
};

struct AlmOptions {
  /// Evaluate dual_quantity at every state (2 extra LMO calls each, not counted).
  bool record_dual = false;
  bool record_full_gap = true;
  bool keep_points = false;
};

struct AlmRun {
  /// Block-coordinate view: two rows per iteration (block 0 = P, block 1 = Q).
  IterateTrace trace;
  /// One row per state t = 0..T.
  std::vector<AlmRow> iterations;
  AlmState state;
};

using StartPair = std::pair<Vector, Vector>;

/// Default start: x0 = lmo(P, 1), y0 = lmo(Q, -1) (2 LMO calls).
AlmState initial_state(const OracleSet& p, const OracleSet& q,
                       const std::optional<StartPair>& start = std::nullopt);

AlmRun alm_run(const OracleSet& p, const OracleSet& q, StepRule rule, std::size_t max_iters,
               const std::optional<StartPair>& start = std::nullopt, AlmOptions options = {});

/// ||x_t - y_t||^2 - support_gap(P, Q, x_t - y_t); always >= 0. Two LMO calls.
double dual_quantity(const OracleSet& p, const OracleSet& q, const AlmState& state);

struct IntersectionPoint {
  Vector point;
  /// Weights of the point over P-side and Q-side vertices (may be empty
  /// when the point was not obtained as a convex combination).
  std::vector<Vector> vertices_p;
  std::vector<double> weights_p;
  std::vector<Vector> vertices_q;
  std::vector<double> weights_q;
};

struct Disjoint {
  /// g with min_{x in P, y in Q} <g, x - y> = margin > 0.
  Vector direction;
  double margin;
};

struct Undecided {
  double best_distance;
};

struct Certificate {
  std::variant<IntersectionPoint, Disjoint, Undecided> verdict;
  std::size_t lmo_calls = 0;
  std::size_t iterations = 0;

  std::string_view verdict_name() const;
  bool is_intersection() const { return std::holds_alternative<IntersectionPoint>(verdict); }
  bool is_disjoint() const { return std::holds_alternative<Disjoint>(verdict); }
  bool is_undecided() const { return std::holds_alternative<Undecided>(verdict); }
};

/// ||x_t - y_t||^2 > threshold(t) with
///   Agnostic:  4 (1 + 2 sqrt 2)(D_P^2 + D_Q^2) / (t + 2)
///   ShortStep: 16 / (t + 4) * ((D_P + D_Q) max{D_P, D_Q} + 2 (D_P^2 + D_Q^2)).
/// True proves P ∩ Q = ∅. Throws InvalidArgument for nonpositive diameters.
bool certify_disjoint_parameterized(const AlmState& state, double diameter_p, double diameter_q,
                                    StepRule rule);
double disjoint_threshold(std::size_t t, double diameter_p, double diameter_q, StepRule rule);

/// Strict-positivity guard for the separation margin at this state.
double certificate_tolerance(double distance, double diameter_p, double diameter_q);

/// Disjoint(x_t - y_t, m) when m = support_gap(P, Q, x_t - y_t) exceeds the
/// guard, nullopt otherwise. Two LMO calls.
std::optional<Certificate> certify_disjoint_free(const OracleSet& p, const OracleSet& q,
                                                 const AlmState& state);

struct AdaptiveResult {
  Certificate certificate;
  AlmState state;
  std::size_t lp_solves = 0;
};

/// ALM with checks at t = 1, 2, 4, 8, ...: first the separation certificate,
/// then (both sets polytopes) the feasibility LP over the seen points.
/// The LP counts as one block-LMO call; the P-side LMO of a check is reused by
/// the next iteration.
AdaptiveResult alm_adaptive(const OracleSet& p, const OracleSet& q, StepRule rule,
                            std::size_t max_iters);

/// Verdict for a finished run: contact, separation, LP over seen points
/// (polytopes), else Undecided(best_distance).
Certificate conclude(const OracleSet& p, const OracleSet& q, const AlmState& state,
                     double best_distance);

struct CertificateCheck {
  bool valid;
  std::string_view reason;
};

/// Re-validates a certificate independently of how it was produced.
CertificateCheck validate_certificate(const OracleSet& p, const OracleSet& q,
                                      const Certificate& certificate);

}  // namespace altmin
