#include "altmin/feasibility.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

namespace altmin {

namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr double kCostTolerance = 1e-11;

std::vector<Vector> dedup(const std::vector<Vector>& points, std::vector<std::size_t>& index) {
  std::vector<Vector> kept;
  index.clear();
  for (const Vector& p : points) {
    std::size_t at = kept.size();
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if ((kept[k] - p).norm() <= kDedupTolerance) {
        at = k;
        break;
      }
    }
    if (at == kept.size()) kept.push_back(p);
    index.push_back(at);
  }
  return kept;
}

// Dense phase-1 tableau. Rows are the scaled equality constraints; the last
// row holds reduced costs and the negated objective.
class PhaseOne {
 public:
  PhaseOne(const Matrix& a, const Vector& b)
      : rows_(a.rows()), structural_(a.cols()), tableau_(a.rows() + 1, a.cols() + a.rows() + 1),
        basis_(static_cast<std::size_t>(a.rows())) {
    const Eigen::Index cols = structural_ + rows_;
    tableau_.setZero();
    tableau_.topLeftCorner(rows_, structural_) = a;
    tableau_.block(0, structural_, rows_, rows_).setIdentity();
    tableau_.col(cols).head(rows_) = b;
    for (Eigen::Index j = 0; j < structural_; ++j) tableau_(rows_, j) = -a.col(j).sum();
    tableau_(rows_, cols) = -b.sum();
    for (Eigen::Index i = 0; i < rows_; ++i) basis_[i] = structural_ + i;
  }

  std::size_t run() {
    const Eigen::Index cols = structural_ + rows_;
    const std::size_t limit = 200 * static_cast<std::size_t>(cols + rows_);
    std::size_t pivots = 0;
    for (;;) {
      // Bland: lowest-index improving column.
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (tableau_(rows_, j) < -kCostTolerance) {
          enter = j;
          break;
        }
      }
      if (enter < 0) break;

      Eigen::Index leave = -1;
      double best_ratio = 0.0;
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const double piv = tableau_(i, enter);
        if (piv <= kPivotTolerance) continue;
        const double ratio = tableau_(i, cols) / piv;
        const bool better = leave < 0 || ratio < best_ratio - 1e-14 ||
                            (ratio <= best_ratio + 1e-14 && basis_[i] < basis_[leave]);
        if (better) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) break;  // cannot happen: phase 1 is bounded below by 0

      pivot(leave, enter);
      if (++pivots > limit) throw std::runtime_error("phase-1 simplex exceeded its pivot limit");
    }
    return pivots;
  }

  double objective() const { return -tableau_(rows_, structural_ + rows_); }

  /// Structural values of the current basic solution.
  Vector solution() const {
    Vector x = Vector::Zero(structural_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) x[basis_[i]] = std::max(0.0, tableau_(i, structural_ + rows_));
    }
    return x;
  }

 private:
  void pivot(Eigen::Index r, Eigen::Index c) {
    tableau_.row(r) /= tableau_(r, c);
    for (Eigen::Index i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = tableau_(i, c);
      if (f != 0.0) tableau_.row(i) -= f * tableau_.row(r);
    }
    basis_[r] = c;
  }

  Eigen::Index rows_;
  Eigen::Index structural_;
  Matrix tableau_;
  std::vector<Eigen::Index> basis_;
};

struct Assembled {
  Matrix a;
  Vector b;
};

Assembled assemble(const std::vector<Vector>& u, const std::vector<Vector>& v, Eigen::Index n) {
  const auto p = static_cast<Eigen::Index>(u.size());
  const auto q = static_cast<Eigen::Index>(v.size());
  Assembled s{Matrix::Zero(n + 2, p + q), Vector::Zero(n + 2)};
  for (Eigen::Index j = 0; j < p; ++j) {
    s.a.col(j).head(n) = u[j];
    s.a(n, j) = 1.0;
  }
  for (Eigen::Index k = 0; k < q; ++k) {
    s.a.col(p + k).head(n) = -v[k];
    s.a(n + 1, p + k) = 1.0;
  }
  s.b[n] = 1.0;
  s.b[n + 1] = 1.0;
  return s;
}

double unscaled_residual(const Assembled& s, const Vector& x) {
  return (s.a * x - s.b).cwiseAbs().maxCoeff();
}

// Least-squares re-solve on the support of a basic solution.
Vector polish(const Matrix& a, const Vector& b, const Vector& x) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x[j] > 0.0) support.push_back(j);
  }
  if (support.empty()) return x;
  Matrix as(a.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) as.col(static_cast<Eigen::Index>(k)) = a.col(support[k]);
  const Vector xs = as.completeOrthogonalDecomposition().solve(b);
  if (!xs.allFinite() || (xs.array() < -1e-12).any()) return x;
  Vector out = Vector::Zero(x.size());
  for (std::size_t k = 0; k < support.size(); ++k) out[support[k]] = std::max(0.0, xs[static_cast<Eigen::Index>(k)]);
  if ((a * out - b).norm() <= (a * x - b).norm()) return out;
  return x;
}

// min w'Gw over the product of two unit simplices (first p entries, last q).
class HullQP {
 public:
  HullQP(std::span<const Vector> a, std::span<const Vector> b)
      : p_(static_cast<Eigen::Index>(a.size())), q_(static_cast<Eigen::Index>(b.size())) {
    const Eigen::Index n = a.front().size();
    Matrix m(n, p_ + q_);
    for (Eigen::Index j = 0; j < p_; ++j) m.col(j) = a[j];
    for (Eigen::Index k = 0; k < q_; ++k) m.col(p_ + k) = -b[k];
    gram_ = m.transpose() * m;
    lipschitz_ = 2.0 * Eigen::SelfAdjointEigenSolver<Matrix>(gram_, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .maxCoeff();
  }

  double solve() {
    if (!(lipschitz_ > 0.0)) return 0.0;
    const std::size_t restarts = std::min<std::size_t>(20, 1 + static_cast<std::size_t>(p_ * q_));
    Vector best;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
      Vector w = start(r);
      descend(w);
      const double val = value(w);
      if (val < best_value) {
        best_value = val;
        best = w;
      }
    }
    const Vector polished = active_set(best);
    best_value = std::min(best_value, value(polished));
    return std::sqrt(std::max(0.0, best_value));
  }

 private:
  double value(const Vector& w) const { return w.dot(gram_ * w); }

  Vector start(std::size_t r) const {
    Vector w = Vector::Zero(p_ + q_);
    if (r == 0) {
      w.head(p_).setConstant(1.0 / static_cast<double>(p_));
      w.tail(q_).setConstant(1.0 / static_cast<double>(q_));
    } else {
      const auto k = static_cast<Eigen::Index>(r - 1);
      w[k % p_] = 1.0;
      w[p_ + (k / p_) % q_] = 1.0;
    }
    return w;
  }

  Vector project(const Vector& w) const {
    Vector out(p_ + q_);
    out.head(p_) = project_onto_simplex(w.head(p_), 1.0);
    out.tail(q_) = project_onto_simplex(w.tail(q_), 1.0);
    return out;
  }

  // Accelerated projected gradient with function-value restarts.
  void descend(Vector& w) const {
    constexpr int kIterations = 400;
    Vector y = w;
    double t = 1.0;
    double last = value(w);
    for (int it = 0; it < kIterations; ++it) {
      const Vector next = project(y - (2.0 / lipschitz_) * (gram_ * y));
      const double v = value(next);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      if (v > last) {
        y = w;
        t = 1.0;
        continue;
      }
      y = next + ((t - 1.0) / t_next) * (next - w);
      w = next;
      t = t_next;
      last = v;
    }
  }

  // Primal active-set method started from a feasible point.
  Vector active_set(Vector w) const {
    const Eigen::Index k = p_ + q_;
    std::vector<bool> in(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) in[j] = w[j] > 1e-12;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!in[j]) w[j] = 0.0;
    }
    const double scale = 1.0 + gram_.cwiseAbs().maxCoeff();
    const int limit = 8 * static_cast<int>(k) + 40;
    for (int iter = 0; iter < limit; ++iter) {
      std::vector<Eigen::Index> s;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (in[j]) s.push_back(j);
      }
      const auto ns = static_cast<Eigen::Index>(s.size());
      Matrix kkt = Matrix::Zero(ns + 2, ns + 2);
      Vector rhs = Vector::Zero(ns + 2);
      for (Eigen::Index a = 0; a < ns; ++a) {
        for (Eigen::Index b = 0; b < ns; ++b) kkt(a, b) = 2.0 * gram_(s[a], s[b]);
        const Eigen::Index side = s[a] < p_ ? ns : ns + 1;
        kkt(a, side) = 1.0;
        kkt(side, a) = 1.0;
      }
      rhs[ns] = 1.0;
      rhs[ns + 1] = 1.0;
      const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      if (!sol.allFinite()) break;

      double step = 1.0;
      Eigen::Index blocking = -1;
      for (Eigen::Index a = 0; a < ns; ++a) {
        const double target = sol[a];
        const double cur = w[s[a]];
        if (target < 0.0 && cur - target > 0.0) {
          const double tau = cur / (cur - target);
          if (tau < step) {
            step = tau;
            blocking = s[a];
          }
        }
      }
      for (Eigen::Index a = 0; a < ns; ++a) w[s[a]] += step * (sol[a] - w[s[a]]);
      if (blocking >= 0) {
        w[blocking] = 0.0;
        in[blocking] = false;
        continue;
      }
      for (Eigen::Index a = 0; a < ns; ++a) w[s[a]] = std::max(0.0, w[s[a]]);

      const Vector grad = 2.0 * (gram_ * w);
      double mult[2] = {0.0, 0.0};
      int count[2] = {0, 0};
      for (Eigen::Index j : s) {
        const int side = j < p_ ? 0 : 1;
        mult[side] += grad[j];
        ++count[side];
      }
      for (int side = 0; side < 2; ++side) {
        if (count[side] > 0) mult[side] /= count[side];
      }
      Eigen::Index add = -1;
      double worst = 1e-12 * scale;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (in[j]) continue;
        const double violation = mult[j < p_ ? 0 : 1] - grad[j];
        if (violation > worst) {
          worst = violation;
          add = j;
        }
      }
      if (add < 0) break;
      in[add] = true;
    }
    return w;
  }

  Eigen::Index p_, q_;
  Matrix gram_;
  double lipschitz_ = 0.0;
};

void check_point_lists(std::span<const Vector> a, std::span<const Vector> b, const char* what) {
  if (a.empty() || b.empty()) throw InvalidArgument(std::string(what) + ": point lists must be nonempty");
  const Eigen::Index n = a.front().size();
  for (const Vector& x : a) {
    if (x.size() != n) throw DimensionError(std::string(what) + ": mixed dimensions");
  }
  for (const Vector& x : b) {
    if (x.size() != n) throw DimensionError(std::string(what) + ": mixed dimensions");
  }
}

std::vector<Vector> subset(const std::vector<Vector>& pts, unsigned long mask) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (mask & (1UL << i)) out.push_back(pts[i]);
  }
  return out;
}

struct PairOutcome {
  bool disjoint;
  double distance;
};

PairOutcome evaluate_pair(const std::vector<Vector>& pv, const std::vector<Vector>& qv,
                          unsigned long a, unsigned long b) {
  const std::vector<Vector> u = subset(pv, a);
  const std::vector<Vector> v = subset(qv, b);
  if (solve_feasibility(FeasibilityProgram(u, v))) return {false, 0.0};
  return {true, HullQP(u, v).solve()};
}

void check_epsilon_inputs(const OracleSet& p, const OracleSet& q) {
  if (p.kind() != SetKind::VPolytope || q.kind() != SetKind::VPolytope) {
    throw InvalidArgument("epsilon_pq requires two V-polytopes");
  }
  if (p.dimension() != q.dimension()) throw DimensionError("epsilon_pq: dimension mismatch");
  const auto total = static_cast<std::size_t>(p.vertices()->cols() + q.vertices()->cols());
  if (total > kEpsilonMaxVertices) {
    throw InvalidArgument("epsilon_pq: " + std::to_string(total) + " vertices exceeds the limit of " +
                          std::to_string(kEpsilonMaxVertices));
  }
}

}  // namespace

std::vector<Vector> columns(const Matrix& m) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out.emplace_back(m.col(j));
  return out;
}

FeasibilityProgram::FeasibilityProgram(std::vector<Vector> u, std::vector<Vector> v) {
  check_point_lists(u, v, "feasibility program");
  dimension_ = u.front().size();
  for (const Vector& x : u) require_finite(x, "feasibility point");
  for (const Vector& x : v) require_finite(x, "feasibility point");
  u_ = dedup(u, u_index_);
  v_ = dedup(v, v_index_);
}

FeasibilityReport solve_feasibility_detailed(const FeasibilityProgram& program) {
  const Eigen::Index n = program.dimension();
  const Assembled raw = assemble(program.u(), program.v(), n);

  // Unit row norms so that one tolerance fits every coordinate scale.
  Matrix a = raw.a;
  Vector b = raw.b;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double norm = a.row(i).norm();
    if (norm > 0.0) {
      a.row(i) /= norm;
      b[i] /= norm;
    }
  }

  PhaseOne lp(a, b);
  const std::size_t pivots = lp.run();
  FeasibilityReport report{lp.objective() <= kPhaseOneTolerance, lp.objective(), pivots, std::nullopt};
  if (!report.feasible) return report;

  Vector x = polish(a, b, lp.solution());
  const auto p = static_cast<Eigen::Index>(program.u().size());
  const auto q = static_cast<Eigen::Index>(program.v().size());
  const double sl = x.head(p).sum();
  const double sk = x.tail(q).sum();
  if (sl > 0.0) x.head(p) /= sl;
  if (sk > 0.0) x.tail(q) /= sk;

  FeasibilityWeights w;
  w.lambda.assign(program.input_u_size(), 0.0);
  w.kappa.assign(program.input_v_size(), 0.0);
  std::vector<bool> used_u(program.u().size()), used_v(program.v().size());
  for (std::size_t i = 0; i < program.u_index().size(); ++i) {
    const std::size_t at = program.u_index()[i];
    if (!used_u[at]) {
      w.lambda[i] = x[static_cast<Eigen::Index>(at)];
      used_u[at] = true;
    }
  }
  for (std::size_t i = 0; i < program.v_index().size(); ++i) {
    const std::size_t at = program.v_index()[i];
    if (!used_v[at]) {
      w.kappa[i] = x[p + static_cast<Eigen::Index>(at)];
      used_v[at] = true;
    }
  }
  w.point = Vector::Zero(n);
  for (Eigen::Index j = 0; j < p; ++j) w.point += x[j] * program.u()[j];
  w.residual = unscaled_residual(raw, x);
  report.weights = std::move(w);
  return report;
}

std::optional<FeasibilityWeights> solve_feasibility(const FeasibilityProgram& program) {
  return solve_feasibility_detailed(program).weights;
}

std::optional<FeasibilityWeights> solve_feasibility(std::span<const Vector> u,
                                                    std::span<const Vector> v) {
  return solve_feasibility(FeasibilityProgram({u.begin(), u.end()}, {v.begin(), v.end()}));
}

double hull_distance(std::span<const Vector> a, std::span<const Vector> b) {
  check_point_lists(a, b, "hull_distance");
  if (solve_feasibility(a, b)) return 0.0;
  return HullQP(a, b).solve();
}

EpsilonPQ epsilon_pq_serial(const OracleSet& p, const OracleSet& q) {
  check_epsilon_inputs(p, q);
  const std::vector<Vector> pv = columns(*p.vertices());
  const std::vector<Vector> qv = columns(*q.vertices());
  const unsigned long na = (1UL << pv.size()) - 1;
  const unsigned long nb = (1UL << qv.size()) - 1;
  EpsilonPQ out;
  out.pairs = na * nb;
  for (unsigned long a = 1; a <= na; ++a) {
    for (unsigned long b = 1; b <= nb; ++b) {
      const PairOutcome r = evaluate_pair(pv, qv, a, b);
      if (r.disjoint) {
        ++out.disjoint_pairs;
        out.value = std::min(out.value, r.distance);
      }
    }
  }
  return out;
}

EpsilonPQ epsilon_pq(const OracleSet& p, const OracleSet& q) {
  check_epsilon_inputs(p, q);
  const std::vector<Vector> pv = columns(*p.vertices());
  const std::vector<Vector> qv = columns(*q.vertices());
  const long na = (1L << pv.size()) - 1;
  const long nb = (1L << qv.size()) - 1;
  const long total = na * nb;

  double best = std::numeric_limits<double>::infinity();
  std::size_t disjoint = 0;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

#pragma omp parallel for schedule(dynamic, 4) reduction(min : best) reduction(+ : disjoint)
  for (long k = 0; k < total; ++k) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      const auto a = static_cast<unsigned long>(k / nb + 1);
      const auto b = static_cast<unsigned long>(k % nb + 1);
      const PairOutcome r = evaluate_pair(pv, qv, a, b);
      if (r.disjoint) {
        ++disjoint;
        best = std::min(best, r.distance);
      }
    } catch (...) {
#pragma omp critical(altmin_epsilon_failure)
      {
        if (!failure) failure = std::current_exception();
      }
      failed = true;
    }
  }
  if (failure) std::rethrow_exception(failure);
  return EpsilonPQ{best, static_cast<std::size_t>(total), disjoint};
}

bool membership(const Vector& point, std::span<const Vector> vertices) {
  if (vertices.empty()) throw InvalidArgument("membership: vertex list must be nonempty");
  for (const Vector& v : vertices) require_same_dimension(point, v, "membership");
  const Vector pts[] = {point};
  const auto w = solve_feasibility(vertices, pts);
  return w && w->residual <= kMembershipTolerance;
}

std::optional<std::vector<double>> barycentric_weights(const OracleSet& set, const Vector& x) {
  const Matrix* v = set.vertices();
  if (v == nullptr) throw InvalidArgument("barycentric_weights requires a V-polytope");
  require_same_dimension(x, v->col(0), "barycentric_weights");
  const std::vector<Vector> u = columns(*v);
  const Vector pts[] = {x};
  auto w = solve_feasibility(u, pts);
  if (!w) return std::nullopt;
  return std::move(w->lambda);
}

bool contains(const OracleSet& set, const Vector& x, double tol) {
  if (x.size() != set.dimension()) throw DimensionError("contains: dimension mismatch");
  if (!x.allFinite()) return false;
  const Geometry& g = set.geometry();
  if (const auto* b = std::get_if<Box>(&g)) {
    return ((x - b->lower).array() >= -tol).all() && ((b->upper - x).array() >= -tol).all();
  }
  if (const auto* b = std::get_if<Ball>(&g)) return (x - b->center).norm() <= b->radius + tol;
  if (const auto* s = std::get_if<Simplex>(&g)) {
    return (x.array() >= -tol).all() && std::abs(x.sum() - s->scale) <= tol;
  }
  if (const auto* b = std::get_if<L1Ball>(&g)) {
    return (x - b->center).lpNorm<1>() <= b->radius + tol;
  }
  const std::vector<Vector> u = columns(*set.vertices());
  const Vector pts[] = {x};
  const auto w = solve_feasibility(u, pts);
  return w && w->residual <= tol;
}

}  // namespace altmin
