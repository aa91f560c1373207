#include "doctest.h"

#include <cmath>
#include <random>

#include "altmin/alm.hpp"
#include "altmin/cbcg.hpp"
#include "altmin/feasibility.hpp"
#include "altmin/instances.hpp"
#include "support/oracles.hpp"

using altmin::BlockProblem;
using altmin::IterateTrace;
using altmin::Matrix;
using altmin::OracleSet;
using altmin::StepRule;
using altmin::Vector;
namespace ts = testing_support;

namespace {

Vector v1(double a) { return (Vector(1) << a).finished(); }
Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }
Vector v3(double a, double b, double c) { return (Vector(3) << a, b, c).finished(); }

/// f(x) = ||x - c||^2 over a single set.
BlockProblem shifted_norm(const OracleSet& set, const Vector& c) {
  const Eigen::Index n = set.dimension();
  return altmin::quadratic_problem({set}, 2.0 * Matrix::Identity(n, n), -2.0 * c, c.squaredNorm());
}

std::vector<double> vanilla_objectives(const BlockProblem& problem, const Vector& start, std::size_t iters,
                                       StepRule rule, std::vector<ts::FwStep>* out = nullptr) {
  auto f = [&](const Vector& x) { return problem.objective.value(std::span<const Vector>(&x, 1)); };
  auto g = [&](const Vector& x) { return problem.objective.partial_gradient(std::span<const Vector>(&x, 1), 0); };
  auto steps = ts::vanilla_frank_wolfe(f, g, problem.blocks[0], start, iters, rule, problem.block_smoothness[0]);
  std::vector<double> objs;
  for (const auto& s : steps) objs.push_back(s.objective);
  if (out) *out = std::move(steps);
  return objs;
}

}  // namespace

TEST_CASE("one-dimensional hand trace: x^2 on [0, 1] from 1") {
  const auto problem = altmin::quadratic_problem({OracleSet::box(v1(0), v1(1))}, Matrix::Constant(1, 1, 2.0), v1(0));
  const std::vector<Vector> start{v1(1)};
  const IterateTrace trace = altmin::cbcg_run(problem, start, StepRule::Agnostic, 5);
  REQUIRE(trace.rows.size() == 5);
  CHECK(trace.rows[0].gamma == 1.0);
  CHECK(trace.final_point[0][0] == 0.0);
  for (const auto& row : trace.rows) CHECK(row.objective == 0.0);
}

TEST_CASE("two boxes: cbcg matches alm row for row") {
  const auto box = OracleSet::box(v2(0, 0), v2(1, 1));
  const std::vector<Vector> start{v2(0, 0), v2(1, 1)};
  for (StepRule rule : {StepRule::Agnostic, StepRule::ShortStep}) {
    const IterateTrace c = altmin::cbcg_run(altmin::squared_distance_problem(box, box), start, rule, 50, {true, true});
    const auto a = altmin::alm_run(box, box, rule, 50, altmin::StartPair{start[0], start[1]}, {false, true, true});
    std::string where;
    CHECK_MESSAGE(ts::identical_rows(c, a.trace, &where), where);
  }
}

TEST_CASE("k = 1 on the simplex is vanilla Frank-Wolfe") {
  const auto simplex = OracleSet::simplex(3);
  const BlockProblem problem = shifted_norm(simplex, Vector::Constant(3, 1.0 / 3.0));
  const std::vector<Vector> start{v3(1, 0, 0)};
  const IterateTrace trace = altmin::cbcg_run(problem, start, StepRule::Agnostic, 500, {true, true});
  std::vector<ts::FwStep> steps;
  const auto objs = vanilla_objectives(problem, start[0], 500, StepRule::Agnostic, &steps);
  for (std::size_t t = 0; t < objs.size(); ++t) {
    CHECK(trace.rows[t].objective == objs[t]);
    CHECK(trace.rows[t].gamma == steps[t].gamma);
    CHECK(trace.rows[t].block_gap == steps[t].gap);
    CHECK(trace.lmo_outputs[t] == steps[t].lmo_output);
    CHECK(trace.points[t][0] == steps[t].iterate);
    // f(x^t) <= 8/(t+2) * D^2 with D^2 = 2, after t + 1 steps.
    CHECK(trace.rows[t].objective <= 8.0 / (static_cast<double>(t + 1) + 2.0) * 2.0 + 1e-9);
  }
  const auto report = altmin::check_rate_bounds(trace, problem, 0.0);
  CHECK(report.ok());
  CHECK(report.rows.size() == 1000);
}

TEST_CASE("k = 1 matches vanilla Frank-Wolfe on every block-suite problem and a polytope") {
  std::vector<std::pair<BlockProblem, Vector>> cases;
  for (const auto& inst : altmin::block_suite()) {
    if (inst.problem.size() == 1) cases.emplace_back(inst.problem, inst.start[0]);
  }
  std::mt19937_64 rng(3);
  const auto poly = OracleSet::vpolytope(ts::random_points(rng, 9, 3, Vector::Zero(3)));
  cases.emplace_back(shifted_norm(poly, v3(2, 0.5, -1)), poly.lmo(Vector::Ones(3)));
  for (const auto& [problem, x0] : cases) {
    for (StepRule rule : {StepRule::Agnostic, StepRule::ShortStep}) {
      const IterateTrace trace = altmin::cbcg_run(problem, std::vector<Vector>{x0}, rule, 300);
      const auto objs = vanilla_objectives(problem, x0, 300, rule);
      bool same = true;
      for (std::size_t t = 0; t < objs.size(); ++t) same = same && trace.rows[t].objective == objs[t];
      CHECK(same);
    }
  }
}

TEST_CASE("full gap examples") {
  const auto box = OracleSet::box(v2(0, 0), v2(1, 1));
  const BlockProblem problem = altmin::squared_distance_problem(box, box);
  const std::vector<Vector> pt{v2(0, 0), v2(1, 1)};
  const Vector g0 = 2.0 * (pt[0] - pt[1]);
  const Vector g1 = 2.0 * (pt[1] - pt[0]);
  double brute = -1e300;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Vector v = v2(a & 1, a >> 1), w = v2(b & 1, b >> 1);
      brute = std::max(brute, g0.dot(pt[0] - v) + g1.dot(pt[1] - w));
    }
  }
  CHECK(altmin::full_gap(problem, pt) == brute);
  CHECK(brute == 8.0);

  const std::vector<Vector> opt{v2(0.3, 0.7), v2(0.3, 0.7)};
  CHECK(std::abs(altmin::full_gap(problem, opt)) <= 1e-9);

  const Vector c = v3(1, -2, 0.5);
  const auto simplex = OracleSet::simplex(3);
  const BlockProblem linear = altmin::quadratic_problem({simplex}, Matrix::Zero(3, 3), c);
  CHECK(altmin::full_gap(linear, std::vector<Vector>{simplex.lmo(c)}) == 0.0);
}

TEST_CASE("rate check flags a fabricated violation") {
  const auto simplex = OracleSet::simplex(3);
  const BlockProblem problem = shifted_norm(simplex, Vector::Constant(3, 1.0 / 3.0));
  IterateTrace trace = altmin::cbcg_run(problem, std::vector<Vector>{v3(1, 0, 0)}, StepRule::Agnostic, 20);
  CHECK(altmin::check_rate_bounds(trace, problem, 0.0).ok());
  trace.rows[9].objective = 100.0;
  const auto report = altmin::check_rate_bounds(trace, problem, 0.0);
  CHECK_FALSE(report.ok());
  CHECK(report.violations == 1);
}

TEST_CASE("two-box short step satisfies the short-step rate with L = L_i = 2") {
  const auto box = OracleSet::box(v2(0, 0), v2(1, 1));
  BlockProblem problem = altmin::squared_distance_problem(box, OracleSet::box(v2(2, 0), v2(3, 1)));
  problem.smoothness = 2.0;
  const IterateTrace trace =
      altmin::cbcg_run(problem, std::vector<Vector>{v2(0, 0), v2(3, 1)}, StepRule::ShortStep, 200);
  CHECK(altmin::check_rate_bounds(trace, problem, 1.0).ok());
}

TEST_CASE("rate bounds hold on the block suite") {
  for (const auto& inst : altmin::block_suite()) {
    for (StepRule rule : {StepRule::Agnostic, StepRule::ShortStep}) {
      CAPTURE(inst.name);
      const IterateTrace trace = altmin::cbcg_run(inst.problem, inst.start, rule, 200);
      CHECK(altmin::check_rate_bounds(trace, inst.problem, inst.fstar).ok());
    }
  }
}

TEST_CASE("invariants along block-suite traces") {
  std::mt19937_64 rng(11);
  for (const auto& inst : altmin::block_suite()) {
    CAPTURE(inst.name);
    const IterateTrace agn = altmin::cbcg_run(inst.problem, inst.start, StepRule::Agnostic, 100, {true, true});
    const IterateTrace sst = altmin::cbcg_run(inst.problem, inst.start, StepRule::ShortStep, 100, {true, true});
    std::size_t prev_calls = 0;
    for (const auto& row : agn.rows) {
      CHECK(row.lmo_calls > prev_calls);
      prev_calls = row.lmo_calls;
      CHECK(row.gamma >= 0.0);
      CHECK(row.gamma <= 1.0);
      if (row.full_gap) CHECK(*row.full_gap >= row.objective - inst.fstar - 1e-9);
    }
    double prev = sst.initial_objective;
    for (const auto& row : sst.rows) {
      CHECK(row.objective <= prev + 1e-12);
      prev = row.objective;
    }
    // Every iterate stays feasible.
    for (const auto& pts : agn.points) {
      for (std::size_t i = 0; i < pts.size(); ++i) CHECK(altmin::contains(inst.problem.blocks[i], pts[i], 1e-9));
    }
  }
}

TEST_CASE("partial gradients match central differences") {
  std::mt19937_64 rng(21);
  for (const auto& inst : altmin::block_suite()) {
    CAPTURE(inst.name);
    const auto& prob = inst.problem;
    for (int s = 0; s < 50; ++s) {
      std::vector<Vector> x;
      for (const auto& b : prob.blocks) x.push_back(ts::random_feasible(b, rng));
      for (std::size_t i = 0; i < prob.size(); ++i) {
        auto fi = [&](const Vector& xi) {
          std::vector<Vector> y = x;
          y[i] = xi;
          return prob.objective.value(y);
        };
        const Vector fd = ts::finite_difference(fi, x[i], 1e-6);
        const Vector g = prob.objective.partial_gradient(x, i);
        CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
      }
    }
  }
}

TEST_CASE("vpolytope weights stay a convex combination") {
  std::mt19937_64 rng(4);
  const auto poly = OracleSet::vpolytope(ts::random_points(rng, 8, 3, Vector::Zero(3)));
  const BlockProblem problem = shifted_norm(poly, v3(0.1, 0.2, 0.3));
  for (StepRule rule : {StepRule::Agnostic, StepRule::ShortStep}) {
    const IterateTrace trace =
        altmin::cbcg_run(problem, std::vector<Vector>{poly.lmo(Vector::Ones(3))}, rule, 2000);
    CHECK(trace.weight_sum_error <= 1e-12);
    CHECK(trace.min_weight >= 0.0);
    REQUIRE(trace.final_weights[0].has_value());
    Vector combo = *poly.vertices() * Eigen::Map<const Vector>(trace.final_weights[0]->data(),
                                                                static_cast<Eigen::Index>(trace.final_weights[0]->size()));
    CHECK((combo - trace.final_point[0]).norm() <= 1e-9);
  }
}

TEST_CASE("cbcg errors") {
  const auto box = OracleSet::box(v2(0, 0), v2(1, 1));
  const BlockProblem problem = shifted_norm(box, v2(0, 0));
  CHECK_THROWS_AS(altmin::cbcg_run(problem, std::vector<Vector>{v2(2, 2)}, StepRule::Agnostic, 5),
                  altmin::InvalidArgument);
  CHECK_THROWS_AS(altmin::cbcg_run(problem, std::vector<Vector>{v2(0, 0)}, StepRule::Agnostic, 0),
                  altmin::InvalidArgument);
  const auto tri = OracleSet::vpolytope({v2(0, 0), v2(1, 0), v2(0, 1)});
  CHECK_THROWS_AS(altmin::cbcg_run(shifted_norm(tri, v2(0, 0)), std::vector<Vector>{v2(1, 1)}, StepRule::Agnostic, 5),
                  altmin::InvalidArgument);

  BlockProblem blowup = problem;
  int calls = 0;
  blowup.objective.value = [&calls](std::span<const Vector> x) {
    return ++calls > 4 ? std::numeric_limits<double>::quiet_NaN() : x[0].squaredNorm();
  };
  try {
    altmin::cbcg_run(blowup, std::vector<Vector>{v2(1, 1)}, StepRule::Agnostic, 10, {false, false});
    FAIL("expected NonFiniteError");
  } catch (const altmin::NonFiniteError& e) {
    REQUIRE(e.iteration().has_value());
    CHECK(*e.iteration() == 3);
  }
}
