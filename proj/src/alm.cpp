#include "altmin/alm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "altmin/feasibility.hpp"

namespace altmin {

namespace {

constexpr double kStartTolerance = 1e-8;
constexpr double kWeightSumTolerance = 1e-9;

bool is_power_of_two(std::size_t t) { return t != 0 && (t & (t - 1)) == 0; }

struct CachedLmo {
  Vector direction;
  LmoResult result;
};

// One engine shared by alm_run and alm_adaptive so both execute the exact
// same arithmetic.
class AlmEngine {
 public:
  AlmEngine(const OracleSet& p, const OracleSet& q, StepRule rule, AlmState state)
      : p_(p), q_(q), rule_(rule), state_(std::move(state)) {}

  AlmState& state() { return state_; }

  // Moves the state from t to t + 1. Appends two block rows to `trace` if given.
  void step(IterateTrace* trace, bool record_full_gap, bool keep_points) {
    AlmState& s = state_;
    const std::size_t t = s.t;
    const double agnostic = 2.0 / (static_cast<double>(t) + 2.0);

    // P side.
    const Vector dx = s.x - s.y;
    if (!dx.allFinite()) throw NonFiniteError("alm: iterate is not finite", t);
    LmoResult u;
    if (cache_ && cache_->direction.size() == dx.size() && cache_->direction == dx) {
      u = std::move(cache_->result);
    } else {
      u = p_.lmo_indexed(dx);
      ++s.lmo_calls;
    }
    cache_.reset();
    const Vector gx = 2.0 * (s.x - s.y);
    const double gap_x = -gx.dot(u.point - s.x);
    double gamma1 = agnostic;
    if (rule_ == StepRule::ShortStep) gamma1 = short_step(dx, s.x, u.point);
    s.x = s.x + gamma1 * (u.point - s.x);
    s.seen_p.blend(gamma1, s.seen_p.insert(u.point));
    if (trace != nullptr) {
      trace->rows.push_back({2 * t, 0, (s.x - s.y).squaredNorm(), gap_x, std::nullopt, gamma1, s.lmo_calls});
      if (keep_points) {
        trace->lmo_outputs.push_back(u.point);
        trace->points.push_back({s.x, s.y});
      }
    }

    // Q side, against the updated x.
    const Vector dy = s.y - s.x;
    const LmoResult v = q_.lmo_indexed(dy);
    ++s.lmo_calls;
    const Vector gy = 2.0 * (s.y - s.x);
    const double gap_y = -gy.dot(v.point - s.y);
    double gamma2 = agnostic;
    if (rule_ == StepRule::ShortStep) gamma2 = short_step(dy, s.y, v.point);
    s.y = s.y + gamma2 * (v.point - s.y);
    s.seen_q.blend(gamma2, s.seen_q.insert(v.point));
    if (!s.x.allFinite() || !s.y.allFinite()) throw NonFiniteError("alm: iterate is not finite", t);
    s.t = t + 1;

    if (trace != nullptr) {
      TraceRow row{2 * t + 1, 1, (s.x - s.y).squaredNorm(), gap_y, std::nullopt, gamma2, s.lmo_calls};
      if (record_full_gap) row.full_gap = full_gap();
      trace->rows.push_back(row);
      if (keep_points) {
        trace->lmo_outputs.push_back(v.point);
        trace->points.push_back({s.x, s.y});
      }
    }
  }

  // Same arithmetic as cbcg's full_gap on squared_distance_problem.
  double full_gap() const {
    const Vector gx = 2.0 * (state_.x - state_.y);
    const Vector gy = 2.0 * (state_.y - state_.x);
    double gap = 0.0;
    gap += gx.dot(state_.x - p_.lmo(gx));
    gap += gy.dot(state_.y - q_.lmo(gy));
    return gap;
  }

  // Separation margin at the current state; the P-side LMO is kept for the
  // next iteration, whose direction is identical.
  double checked_margin() {
    AlmState& s = state_;
    const Vector g = s.x - s.y;
    LmoResult u = p_.lmo_indexed(g);
    const Vector w = q_.lmo(-g);
    s.lmo_calls += 2;
    const double margin = g.dot(u.point) - g.dot(w);
    cache_ = CachedLmo{g, std::move(u)};
    return margin;
  }

 private:
  // min{<d, x - u> / ||x - u||^2, 1}, 0 when x is already at u.
  static double short_step(const Vector& d, const Vector& x, const Vector& u) {
    if ((u - x).norm() < kZeroStepLength) return 0.0;
    const double gx = (2.0 * d).dot(x - u);
    const double gamma = gx / (2.0 * (x - u).squaredNorm());
    return std::clamp(gamma, 0.0, 1.0);
  }

  const OracleSet& p_;
  const OracleSet& q_;
  StepRule rule_;
  AlmState state_;
  std::optional<CachedLmo> cache_;
};

AlmRow observe(const OracleSet& p, const OracleSet& q, const AlmState& s, bool record_dual) {
  AlmRow row{s.t, (s.x - s.y).squaredNorm(), std::nullopt, std::nullopt, std::nullopt, s.lmo_calls};
  if (record_dual) row.dual = dual_quantity(p, q, s);
  if (p.has_projection() && q.has_projection()) {
    const Vector z = 0.5 * (s.x + s.y);
    row.midpoint_dist_p = (z - p.project(z)).norm();
    row.midpoint_dist_q = (z - q.project(z)).norm();
  }
  return row;
}

IntersectionPoint contact_point(const AlmState& s) {
  return IntersectionPoint{s.x, s.seen_p.points(), s.seen_p.weights(), s.seen_q.points(),
                           s.seen_q.weights()};
}

std::optional<IntersectionPoint> recover_by_lp(const AlmState& s) {
  const auto w = solve_feasibility(FeasibilityProgram(s.seen_p.points(), s.seen_q.points()));
  if (!w) return std::nullopt;
  return IntersectionPoint{w->point, s.seen_p.points(), w->lambda, s.seen_q.points(), w->kappa};
}

}  // namespace

std::size_t SeenSet::insert(const Vector& p) {
  std::vector<double> key(p.data(), p.data() + p.size());
  const auto [it, inserted] = lookup_.try_emplace(std::move(key), points_.size());
  if (inserted) {
    points_.push_back(p);
    raw_.push_back(0.0);
  }
  return it->second;
}

void SeenSet::blend(double gamma, std::size_t index) {
  if (gamma >= 1.0) {
    std::fill(raw_.begin(), raw_.end(), 0.0);
    raw_[index] = 1.0;
    scale_ = 1.0;
    return;
  }
  if (gamma <= 0.0) return;
  scale_ *= (1.0 - gamma);
  raw_[index] += gamma / scale_;
  if (scale_ < 1e-150) {
    for (double& r : raw_) r *= scale_;
    scale_ = 1.0;
  }
}

std::vector<double> SeenSet::weights() const {
  std::vector<double> w(raw_.size());
  std::transform(raw_.begin(), raw_.end(), w.begin(), [&](double r) { return r * scale_; });
  return w;
}

AlmState initial_state(const OracleSet& p, const OracleSet& q, const std::optional<StartPair>& start) {
  if (p.dimension() != q.dimension()) throw DimensionError("alm: P and Q have different dimensions");
  AlmState s;
  if (start) {
    s.x = start->first;
    s.y = start->second;
    if (s.x.size() != p.dimension() || s.y.size() != q.dimension()) {
      throw DimensionError("alm: start point has the wrong dimension");
    }
    if (!contains(p, s.x, kStartTolerance)) throw InvalidArgument("alm: x0 is not in P");
    if (!contains(q, s.y, kStartTolerance)) throw InvalidArgument("alm: y0 is not in Q");
  } else {
    const Vector ones = Vector::Ones(p.dimension());
    s.x = p.lmo(ones);
    s.y = q.lmo(-ones);
    s.lmo_calls = 2;
  }
  s.seen_p.blend(1.0, s.seen_p.insert(s.x));
  s.seen_q.blend(1.0, s.seen_q.insert(s.y));
  return s;
}

AlmRun alm_run(const OracleSet& p, const OracleSet& q, StepRule rule, std::size_t max_iters,
               const std::optional<StartPair>& start, AlmOptions options) {
  AlmEngine engine(p, q, rule, initial_state(p, q, start));
  AlmRun run;
  run.trace.rule = rule;
  run.trace.blocks = 2;
  run.trace.start = {engine.state().x, engine.state().y};
  run.trace.initial_objective = (engine.state().x - engine.state().y).squaredNorm();
  if (options.record_full_gap) run.trace.initial_full_gap = engine.full_gap();
  run.trace.rows.reserve(2 * max_iters);
  run.iterations.reserve(max_iters + 1);
  run.iterations.push_back(observe(p, q, engine.state(), options.record_dual));

  for (std::size_t it = 0; it < max_iters; ++it) {
    engine.step(&run.trace, options.record_full_gap, options.keep_points);
    run.iterations.push_back(observe(p, q, engine.state(), options.record_dual));
  }
  run.state = std::move(engine.state());
  run.trace.final_point = {run.state.x, run.state.y};
  return run;
}

double dual_quantity(const OracleSet& p, const OracleSet& q, const AlmState& state) {
  const Vector d = state.x - state.y;
  return d.squaredNorm() - support_gap(p, q, d);
}

double disjoint_threshold(std::size_t t, double diameter_p, double diameter_q, StepRule rule) {
  const double d_sq = diameter_p * diameter_p + diameter_q * diameter_q;
  const double td = static_cast<double>(t);
  if (rule == StepRule::Agnostic) return 4.0 * kOnePlusTwoSqrtTwo * d_sq / (td + 2.0);
  return 16.0 / (td + 4.0) * ((diameter_p + diameter_q) * std::max(diameter_p, diameter_q) + 2.0 * d_sq);
}

bool certify_disjoint_parameterized(const AlmState& state, double diameter_p, double diameter_q,
                                    StepRule rule) {
  if (!(diameter_p > 0.0) || !(diameter_q > 0.0)) {
    throw InvalidArgument("certify_disjoint_parameterized: diameters must be > 0");
  }
  return (state.x - state.y).squaredNorm() > disjoint_threshold(state.t, diameter_p, diameter_q, rule);
}

double certificate_tolerance(double distance, double diameter_p, double diameter_q) {
  return 1e-10 * (1.0 + distance * (diameter_p + diameter_q));
}

std::optional<Certificate> certify_disjoint_free(const OracleSet& p, const OracleSet& q,
                                                 const AlmState& state) {
  const Vector g = state.x - state.y;
  const double margin = support_gap(p, q, g);
  if (margin > certificate_tolerance(g.norm(), p.diameter(), q.diameter())) {
    return Certificate{Disjoint{g, margin}, state.lmo_calls + 2, state.t};
  }
  return std::nullopt;
}

AdaptiveResult alm_adaptive(const OracleSet& p, const OracleSet& q, StepRule rule,
                            std::size_t max_iters) {
  AlmEngine engine(p, q, rule, initial_state(p, q));
  AlmState& s = engine.state();
  const bool polytopes = p.is_polytope() && q.is_polytope();
  const double dp = p.diameter();
  const double dq = q.diameter();
  std::size_t lp_solves = 0;
  std::size_t lp_sizes[2] = {0, 0};
  double best = s.distance();

  auto finish = [&](std::variant<IntersectionPoint, Disjoint, Undecided> verdict) {
    return AdaptiveResult{Certificate{std::move(verdict), s.lmo_calls, s.t}, std::move(s), lp_solves};
  };

  for (std::size_t t = 0; t < max_iters; ++t) {
    if (s.distance() <= kContactDistance) return finish(contact_point(s));
    engine.step(nullptr, false, false);
    best = std::min(best, s.distance());
    if (!is_power_of_two(t)) continue;

    const double margin = engine.checked_margin();
    if (margin > certificate_tolerance(s.distance(), dp, dq)) {
      return finish(Disjoint{s.x - s.y, margin});
    }
    if (polytopes && (s.seen_p.size() != lp_sizes[0] || s.seen_q.size() != lp_sizes[1])) {
      lp_sizes[0] = s.seen_p.size();
      lp_sizes[1] = s.seen_q.size();
      ++lp_solves;
      ++s.lmo_calls;
      if (auto point = recover_by_lp(s)) return finish(std::move(*point));
    }
  }
  if (s.distance() <= kContactDistance) return finish(contact_point(s));
  return finish(Undecided{best});
}

Certificate conclude(const OracleSet& p, const OracleSet& q, const AlmState& state,
                     double best_distance) {
  if (state.distance() <= kContactDistance) {
    return Certificate{contact_point(state), state.lmo_calls, state.t};
  }
  if (auto cert = certify_disjoint_free(p, q, state)) return *cert;
  if (p.is_polytope() && q.is_polytope()) {
    if (auto point = recover_by_lp(state)) {
      return Certificate{std::move(*point), state.lmo_calls + 3, state.t};
    }
  }
  return Certificate{Undecided{best_distance}, state.lmo_calls + 2, state.t};
}

std::string_view Certificate::verdict_name() const {
  if (is_intersection()) return "IntersectionPoint";
  if (is_disjoint()) return "Disjoint";
  return "Undecided";
}

namespace {

bool weights_ok(const std::vector<Vector>& pts, const std::vector<double>& w, const Vector& point) {
  if (pts.size() != w.size() || pts.empty()) return false;
  double sum = 0.0;
  Vector combo = Vector::Zero(point.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < -1e-12 || w[i] > 1.0 + 1e-12) return false;
    sum += w[i];
    combo += w[i] * pts[i];
  }
  return std::abs(sum - 1.0) <= kWeightSumTolerance && (combo - point).norm() <= kMembershipTolerance;
}

}  // namespace

CertificateCheck validate_certificate(const OracleSet& p, const OracleSet& q,
                                      const Certificate& certificate) {
  if (const auto* ip = std::get_if<IntersectionPoint>(&certificate.verdict)) {
    if (ip->point.size() != p.dimension()) return {false, "point has the wrong dimension"};
    if (!ip->weights_p.empty() && !weights_ok(ip->vertices_p, ip->weights_p, ip->point)) {
      return {false, "P-side weights do not reproduce the point"};
    }
    if (!ip->weights_q.empty() && !weights_ok(ip->vertices_q, ip->weights_q, ip->point)) {
      return {false, "Q-side weights do not reproduce the point"};
    }
    if (!contains(p, ip->point, kMembershipTolerance)) return {false, "point is not in P"};
    if (!contains(q, ip->point, kMembershipTolerance)) return {false, "point is not in Q"};
    return {true, "ok"};
  }
  if (const auto* dj = std::get_if<Disjoint>(&certificate.verdict)) {
    if (dj->direction.size() != p.dimension()) return {false, "direction has the wrong dimension"};
    const double margin = support_gap(p, q, dj->direction);
    if (!(margin > 0.0)) return {false, "recomputed margin is not positive"};
    if (std::abs(margin - dj->margin) > 1e-9 * (1.0 + std::abs(margin))) {
      return {false, "recorded margin disagrees with the recomputed one"};
    }
    return {true, "ok"};
  }
  return {true, "undecided"};
}

}  // namespace altmin
