#pragma once

// Von Neumann alternating projections (POCS):
//   x_{t+1} = proj_P(y_t),  y_{t+1} = proj_Q(x_{t+1}).
// Baseline for sets with closed-form projections.

#include <cstddef>
#include <optional>
#include <vector>

#include "altmin/oracles.hpp"

namespace altmin {

/// Iteration stops once ||y_{t+1} - y_t|| falls to this.
inline constexpr double kPocsStall = 1e-13;

struct PocsRow {
  std::size_t t;
  Vector x;
  Vector y;
  /// ||y_{t-1} - x_t - d||^2 + ||x_t - y_t + d||^2.
  double residual;
  /// ||x_t - y_t||^2.
  double distance_sq;
};

struct PocsTrace {
  Vector y0;
  /// d = y* - x*: closest point of Q minus closest point of P. Zero when the
  /// caller does not know it (the intersecting-case residual).
  Vector distance_vector;
  std::vector<PocsRow> rows;
  bool stalled = false;

  bool intersecting_residual() const { return distance_vector.isZero(0.0); }
};

/// Both sets must support projection (UnsupportedOperation otherwise).
PocsTrace pocs_run(const OracleSet& p, const OracleSet& q, const Vector& y0, std::size_t max_iters,
                   const std::optional<Vector>& distance_vector = std::nullopt);

struct PocsBoundRow {
  std::size_t horizon;
  /// (1/T) sum_{t<=T} residual_t against dist_y0^2 / T.
  double averaged_residual;
  double bound;
  /// ||x_T - y_T||^2, intersecting case only.
  std::optional<double> final_distance_sq;
  bool violated;
};

struct PocsRateReport {
  std::vector<PocsBoundRow> rows;
  bool intersecting = false;
  /// distance_sq nonincreasing along the trace (checked when intersecting).
  bool monotone = true;
  std::size_t violations = 0;

  bool ok() const { return violations == 0 && monotone; }
};

/// dist_y0 = dist(y0, Q_min), or dist(y0, P ∩ Q) when the trace was run with
/// a zero distance vector, in which case the last-iterate bound and
/// monotonicity are checked too.
PocsRateReport check_pocs_rate(const PocsTrace& trace, double dist_y0);

}  // namespace altmin
