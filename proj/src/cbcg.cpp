#include "altmin/cbcg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "altmin/feasibility.hpp"

namespace altmin {

namespace {

constexpr double kStartTolerance = 1e-8;

double largest_eigenvalue(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

double agnostic_step(std::size_t t, std::size_t k) {
  return 2.0 / (static_cast<double>(t / k) + 2.0);
}

}  // namespace

std::string_view to_string(StepRule rule) {
  return rule == StepRule::Agnostic ? "agnostic" : "short";
}

void BlockProblem::validate() const {
  if (blocks.empty()) throw InvalidArgument("block problem needs at least one block");
  if (block_smoothness.size() != blocks.size()) {
    throw InvalidArgument("block problem needs one smoothness constant per block");
  }
  if (!(smoothness > 0.0)) throw InvalidArgument("smoothness L must be > 0");
  for (double li : block_smoothness) {
    if (!(li > 0.0)) throw InvalidArgument("block smoothness L_i must be > 0");
  }
  if (!objective.value || !objective.partial_gradient) {
    throw InvalidArgument("block problem objective is incomplete");
  }
}

BlockProblem squared_distance_problem(OracleSet p, OracleSet q) {
  if (p.dimension() != q.dimension()) throw DimensionError("squared distance: dimension mismatch");
  BlockProblem problem;
  problem.blocks = {std::move(p), std::move(q)};
  problem.objective.value = [](std::span<const Vector> x) { return (x[0] - x[1]).squaredNorm(); };
  problem.objective.partial_gradient = [](std::span<const Vector> x, std::size_t i) -> Vector {
    return i == 0 ? Vector(2.0 * (x[0] - x[1])) : Vector(2.0 * (x[1] - x[0]));
  };
  problem.smoothness = 4.0;
  problem.block_smoothness = {2.0, 2.0};
  return problem;
}

BlockProblem quadratic_problem(std::vector<OracleSet> blocks, Matrix hessian, Vector linear,
                               double constant) {
  std::vector<Eigen::Index> offset{0};
  for (const OracleSet& b : blocks) offset.push_back(offset.back() + b.dimension());
  const Eigen::Index total = offset.back();
  if (hessian.rows() != total || hessian.cols() != total || linear.size() != total) {
    throw DimensionError("quadratic problem: Hessian/linear term do not match the blocks");
  }
  if (!hessian.isApprox(hessian.transpose())) throw InvalidArgument("Hessian must be symmetric");

  BlockProblem problem;
  problem.smoothness = largest_eigenvalue(hessian);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Eigen::Index n = offset[i + 1] - offset[i];
    problem.block_smoothness.push_back(largest_eigenvalue(hessian.block(offset[i], offset[i], n, n)));
  }
  problem.blocks = std::move(blocks);

  auto stack = [offset, total](std::span<const Vector> x) {
    Vector z(total);
    for (std::size_t i = 0; i < x.size(); ++i) z.segment(offset[i], x[i].size()) = x[i];
    return z;
  };
  problem.objective.value = [=](std::span<const Vector> x) {
    const Vector z = stack(x);
    return 0.5 * z.dot(hessian * z) + linear.dot(z) + constant;
  };
  problem.objective.partial_gradient = [=](std::span<const Vector> x, std::size_t i) -> Vector {
    const Vector z = stack(x);
    const Eigen::Index n = offset[i + 1] - offset[i];
    return hessian.middleRows(offset[i], n) * z + linear.segment(offset[i], n);
  };
  return problem;
}

double full_gap(const BlockProblem& problem, std::span<const Vector> point) {
  double gap = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const Vector g = problem.objective.partial_gradient(point, i);
    gap += g.dot(point[i] - problem.blocks[i].lmo(g));
  }
  return gap;
}

IterateTrace cbcg_run(const BlockProblem& problem, std::span<const Vector> start, StepRule rule,
                      std::size_t max_sweeps, CbcgOptions options) {
  problem.validate();
  const std::size_t k = problem.size();
  if (start.size() != k) throw InvalidArgument("cbcg: need one start point per block");
  if (max_sweeps < 1) throw InvalidArgument("cbcg: max_sweeps must be >= 1");

  IterateTrace trace;
  trace.rule = rule;
  trace.blocks = k;
  trace.start.assign(start.begin(), start.end());

  std::vector<Vector> x(start.begin(), start.end());
  std::vector<std::optional<std::vector<double>>> weights(k);
  for (std::size_t i = 0; i < k; ++i) {
    const OracleSet& block = problem.blocks[i];
    if (x[i].size() != block.dimension()) {
      throw DimensionError("cbcg: start point " + std::to_string(i) + " has the wrong dimension");
    }
    require_finite(x[i], "cbcg start point");
    if (block.kind() == SetKind::VPolytope) {
      weights[i] = barycentric_weights(block, x[i]);
      if (!weights[i]) throw InvalidArgument("cbcg: start point " + std::to_string(i) + " is infeasible");
    } else if (!contains(block, x[i], kStartTolerance)) {
      throw InvalidArgument("cbcg: start point " + std::to_string(i) + " is infeasible");
    }
  }

  auto evaluate = [&](std::size_t iteration) {
    const double f = problem.objective.value(x);
    if (!std::isfinite(f)) throw NonFiniteError("cbcg: objective is not finite", iteration);
    return f;
  };

  trace.initial_objective = evaluate(0);
  if (options.record_full_gap) trace.initial_full_gap = full_gap(problem, x);
  trace.rows.reserve(max_sweeps * k);

  std::size_t lmo_calls = 0;
  const std::size_t iterations = max_sweeps * k;
  for (std::size_t t = 0; t < iterations; ++t) {
    const std::size_t i = t % k;
    const Vector g = problem.objective.partial_gradient(x, i);
    if (g.size() != x[i].size()) throw DimensionError("cbcg: partial gradient has the wrong dimension");
    if (!g.allFinite()) throw NonFiniteError("cbcg: partial gradient is not finite", t);

    const LmoResult v = problem.blocks[i].lmo_indexed(g);
    ++lmo_calls;
    const Vector direction = v.point - x[i];
    const double block_gap = -g.dot(direction);

    double gamma = 0.0;
    if (rule == StepRule::Agnostic) {
      gamma = agnostic_step(t, k);
    } else {
      const double len = direction.norm();
      if (len >= kZeroStepLength) {
        gamma = g.dot(x[i] - v.point) / (problem.block_smoothness[i] * (x[i] - v.point).squaredNorm());
        gamma = std::clamp(gamma, 0.0, 1.0);
      }
    }

    x[i] = x[i] + gamma * (v.point - x[i]);
    if (weights[i]) {
      auto& w = *weights[i];
      for (double& wj : w) wj *= (1.0 - gamma);
      w[static_cast<std::size_t>(*v.vertex)] += gamma;
      const double sum = std::accumulate(w.begin(), w.end(), 0.0);
      trace.weight_sum_error = std::max(trace.weight_sum_error, std::abs(sum - 1.0));
      trace.min_weight = std::min(trace.min_weight, *std::min_element(w.begin(), w.end()));
    }

    TraceRow row{t, i, evaluate(t), block_gap, std::nullopt, gamma, lmo_calls};
    if (options.record_full_gap && i == k - 1) row.full_gap = full_gap(problem, x);
    trace.rows.push_back(row);
    if (options.keep_points) {
      trace.lmo_outputs.push_back(v.point);
      trace.points.push_back(x);
    }
  }

  trace.final_point = std::move(x);
  trace.final_weights = std::move(weights);
  return trace;
}

RateReport check_rate_bounds(const IterateTrace& trace, const BlockProblem& problem, double fstar) {
  problem.validate();
  const std::size_t k = problem.size();
  if (trace.blocks != k) throw InvalidArgument("check_rate_bounds: trace and problem disagree on k");

  std::vector<double> diam;
  for (const OracleSet& b : problem.blocks) diam.push_back(b.diameter());
  const double d_sq = std::inner_product(diam.begin(), diam.end(), diam.begin(), 0.0);
  const double d = std::sqrt(d_sq);
  const double d_sum = std::accumulate(diam.begin(), diam.end(), 0.0);
  const double big_l = problem.smoothness;
  const auto& li = problem.block_smoothness;

  RateReport report;
  report.rule = trace.rule;
  const double kd = static_cast<double>(k);
  if (trace.rule == StepRule::Agnostic) {
    double c = 2.0 * big_l * d * d_sum;
    for (std::size_t i = 0; i < k; ++i) c += li[i] * diam[i] * diam[i] / 2.0;
    report.constant = c;
  } else {
    double grad_sq = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      grad_sq += problem.objective.partial_gradient(trace.start, i).squaredNorm();
    }
    const double g_bound = big_l * d + std::sqrt(grad_sq);
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      worst = std::max({worst, li[i] * diam[i] * diam[i], g_bound * diam[i]});
    }
    report.constant = worst + kd * big_l * big_l * d_sq / *std::min_element(li.begin(), li.end());
  }

  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t s = 1; s <= trace.sweeps(); ++s) {
    const TraceRow& row = trace.rows[s * k - 1];
    const double sd = static_cast<double>(s);
    const double primal_bound = trace.rule == StepRule::Agnostic
                                    ? 2.0 / (sd + 2.0) * report.constant
                                    : 4.0 * kd / (sd + 4.0) * report.constant;
    const double primal = row.objective - fstar;
    const bool pv = primal > primal_bound + kBoundSlack;
    report.rows.push_back({s, BoundKind::Primal, primal_bound, primal, pv});
    report.violations += pv ? 1 : 0;

    if (row.full_gap) {
      best_gap = std::min(best_gap, *row.full_gap);
      const double dual_bound = trace.rule == StepRule::Agnostic
                                    ? 6.75 / (sd + 2.0) * report.constant
                                    : 8.0 * kd / (sd + 4.0) * report.constant;
      const bool dv = best_gap > dual_bound + kBoundSlack;
      report.rows.push_back({s, BoundKind::Dual, dual_bound, best_gap, dv});
      report.violations += dv ? 1 : 0;
    }
  }
  return report;
}

}  // namespace altmin
