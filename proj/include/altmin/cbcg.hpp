#pragma once

// Cyclic block-coordinate conditional gradient over a product of OracleSets.
//
// Iteration t updates block i = t mod k with one LMO call:
//   v    = lmo(P_i, grad_i f(x^t))
//   x_i += gamma_t * (v - x_i)
// so every iterate stays a convex combination of points of the blocks.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "altmin/oracles.hpp"

namespace altmin {

enum class StepRule { Agnostic, ShortStep };

std::string_view to_string(StepRule rule);

/// Below this ||x_i - v|| the short step is taken to be 0.
inline constexpr double kZeroStepLength = 1e-14;
/// Absolute slack allowed when comparing measured values with rate bounds.
inline constexpr double kBoundSlack = 1e-9;

struct BlockObjective {
  std::function<double(std::span<const Vector>)> value;
  std::function<Vector(std::span<const Vector>, std::size_t)> partial_gradient;
};

struct BlockProblem {
  std::vector<OracleSet> blocks;
  BlockObjective objective;
  /// L: smoothness of f on the whole product.
  double smoothness = 0.0;
  /// L_i: partial smoothness per block.
  std::vector<double> block_smoothness;

  std::size_t size() const { return blocks.size(); }
  /// Throws InvalidArgument if the constants or blocks are inconsistent.
  void validate() const;
};

/// f(x, y) = ||x - y||^2 over P x Q. L_i = 2; L = 4 (largest Hessian eigenvalue).
BlockProblem squared_distance_problem(OracleSet p, OracleSet q);

/// f(z) = 1/2 z'Hz + g'z + c with z the concatenation of the blocks.
/// L and L_i are taken from the eigenvalues of H and of its diagonal blocks.
BlockProblem quadratic_problem(std::vector<OracleSet> blocks, Matrix hessian, Vector linear,
                               double constant = 0.0);

struct TraceRow {
  std::size_t t;
  std::size_t block;
  /// f(x^{t+1}).
  double objective;
  /// <grad_i f(x^t), x_i^t - v^t>.
  double block_gap;
  /// Full Frank-Wolfe gap at x^{t+1}; recorded at the end of every sweep.
  std::optional<double> full_gap;
  double gamma;
  std::size_t lmo_calls;
};

struct IterateTrace {
  StepRule rule = StepRule::Agnostic;
  std::size_t blocks = 0;
  std::vector<Vector> start;
  double initial_objective = 0.0;
  std::optional<double> initial_full_gap;
  std::vector<TraceRow> rows;

  /// Filled only with keep_points: the LMO output and the iterate after each row.
  std::vector<Vector> lmo_outputs;
  std::vector<std::vector<Vector>> points;

  std::vector<Vector> final_point;
  /// Barycentric weights of each V-polytope block over its vertices.
  std::vector<std::optional<std::vector<double>>> final_weights;
  /// Worst |sum(w) - 1| and smallest weight seen over all V-polytope blocks.
  double weight_sum_error = 0.0;
  double min_weight = 1.0;

  std::size_t sweeps() const { return blocks == 0 ? 0 : rows.size() / blocks; }
};

struct CbcgOptions {
  bool keep_points = false;
  bool record_full_gap = true;
};

/// Runs max_sweeps * k block updates from a feasible start.
/// Throws InvalidArgument on an infeasible start, NonFiniteError (with the
/// iteration index) when f or a gradient stops being finite.
IterateTrace cbcg_run(const BlockProblem& problem, std::span<const Vector> start, StepRule rule,
                      std::size_t max_sweeps, CbcgOptions options = {});

/// sum_i max_{v in P_i} <grad_i f(point), point_i - v>; k LMO calls.
double full_gap(const BlockProblem& problem, std::span<const Vector> point);

enum class BoundKind { Primal, Dual };

struct BoundRow {
  std::size_t sweep;
  BoundKind kind;
  double bound;
  double measured;
  bool violated;
};

struct RateReport {
  StepRule rule = StepRule::Agnostic;
  /// The problem-dependent constant multiplying the rate.
  double constant = 0.0;
  std::vector<BoundRow> rows;
  std::size_t violations = 0;

  bool ok() const { return violations == 0; }
};

/// Compares every completed sweep s >= 1 of the trace with the cyclic CG rates:
///   Agnostic:  f(x^{ks}) - f* <= 2/(s+2) C,   min_{r<=s} gap(x^{kr}) <= 6.75/(s+2) C,
///              C = sum_i L_i D_i^2 / 2 + 2 L D sum_i D_i
///   ShortStep: f(x^{ks}) - f* <= 4k/(s+4) C', min_{r<=s} gap(x^{kr}) <= 8k/(s+4) C',
///              C' = max_i max{L_i D_i^2, G_i D_i} + k L^2 D^2 / min_i L_i
/// with G_i = L D + ||grad f(start)||. Dual rows need full_gap in the trace.
RateReport check_rate_bounds(const IterateTrace& trace, const BlockProblem& problem, double fstar);

}  // namespace altmin
