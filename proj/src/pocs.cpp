#include "altmin/pocs.hpp"

#include <string>

#include "altmin/cbcg.hpp"

namespace altmin {

namespace {

constexpr double kMonotoneSlack = 1e-12;

void require_projection(const OracleSet& set, const char* name) {
  if (!set.has_projection()) {
    throw UnsupportedOperation(std::string("pocs: set ") + name + " (" + std::string(to_string(set.kind())) +
                               ") has no projection; use alm_run instead");
  }
}

}  // namespace

PocsTrace pocs_run(const OracleSet& p, const OracleSet& q, const Vector& y0, std::size_t max_iters,
                   const std::optional<Vector>& distance_vector) {
  require_projection(p, "P");
  require_projection(q, "Q");
  if (p.dimension() != q.dimension()) throw DimensionError("pocs: P and Q have different dimensions");
  if (y0.size() != p.dimension()) throw DimensionError("pocs: y0 has the wrong dimension");
  require_finite(y0, "pocs y0");

  PocsTrace trace;
  trace.y0 = y0;
  trace.distance_vector = distance_vector.value_or(Vector::Zero(y0.size()));
  if (trace.distance_vector.size() != y0.size()) throw DimensionError("pocs: distance vector dimension");
  const Vector& d = trace.distance_vector;

  Vector y = y0;
  trace.rows.reserve(max_iters);
  for (std::size_t t = 1; t <= max_iters; ++t) {
    const Vector x = p.project(y);
    const Vector y_next = q.project(x);
    const double residual = (y - x - d).squaredNorm() + (x - y_next + d).squaredNorm();
    trace.rows.push_back({t, x, y_next, residual, (x - y_next).squaredNorm()});
    const double moved = (y_next - y).norm();
    y = y_next;
    if (moved <= kPocsStall) {
      trace.stalled = true;
      break;
    }
  }
  return trace;
}

PocsRateReport check_pocs_rate(const PocsTrace& trace, double dist_y0) {
  PocsRateReport report;
  report.intersecting = trace.intersecting_residual();
  const double r0 = dist_y0 * dist_y0;
  double sum = 0.0;
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const PocsRow& row = trace.rows[i];
    const double horizon = static_cast<double>(row.t);
    sum += row.residual;
    PocsBoundRow out{row.t, sum / horizon, r0 / horizon, std::nullopt, false};
    out.violated = out.averaged_residual > out.bound + kBoundSlack;
    if (report.intersecting) {
      out.final_distance_sq = row.distance_sq;
      out.violated = out.violated || row.distance_sq > out.bound + kBoundSlack;
      if (i > 0 && row.distance_sq > trace.rows[i - 1].distance_sq + kMonotoneSlack) report.monotone = false;
    }
    report.violations += out.violated ? 1 : 0;
    report.rows.push_back(std::move(out));
  }
  return report;
}

}  // namespace altmin
