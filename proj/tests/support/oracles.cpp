#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace testing_support {

std::pair<Eigen::Index, double> brute_vertex_min(const Matrix& vertices, const Vector& c) {
  Eigen::Index best = 0;
  double value = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < vertices.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < vertices.rows(); ++i) s += c[i] * vertices(i, j);
    if (s < value) {
      value = s;
      best = j;
    }
  }
  return {best, value};
}

std::vector<FwStep> vanilla_frank_wolfe(const std::function<double(const Vector&)>& f,
                                        const std::function<Vector(const Vector&)>& grad,
                                        const altmin::OracleSet& set, Vector x, std::size_t iterations,
                                        altmin::StepRule rule, double smoothness) {
  std::vector<FwStep> steps;
  for (std::size_t t = 0; t < iterations; ++t) {
    const Vector g = grad(x);
    const Vector v = set.lmo(g);
    const double gap = -g.dot(v - x);
    double gamma = 2.0 / (static_cast<double>(t) + 2.0);
    if (rule == altmin::StepRule::ShortStep) {
      gamma = 0.0;
      if ((v - x).norm() >= 1e-14) {
        gamma = std::clamp(g.dot(x - v) / (smoothness * (x - v).squaredNorm()), 0.0, 1.0);
      }
    }
    x = x + gamma * (v - x);
    steps.push_back({v, x, gamma, f(x), gap});
  }
  return steps;
}

double point_segment_distance(const Vector& p, const Vector& a, const Vector& b) {
  const Vector ab = b - a;
  const double len_sq = ab.squaredNorm();
  double s = len_sq > 0.0 ? (p - a).dot(ab) / len_sq : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

namespace {

double cross(const Vector& u, const Vector& v) { return u[0] * v[1] - u[1] * v[0]; }

}  // namespace

double segment_segment_distance_2d(const Vector& a, const Vector& b, const Vector& c, const Vector& d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

Vector grid_simplex_projection(const Vector& z, double h) {
  const int n = static_cast<int>(std::lround(1.0 / h));
  Vector best(3);
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      Vector x(3);
      x << i * h, j * h, (n - i - j) * h;
      const double d = (x - z).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = x;
      }
    }
  }
  return best;
}

Vector finite_difference(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

std::vector<Vector> random_points(std::mt19937_64& rng, int count, Eigen::Index n, const Vector& shift) {
  std::vector<Vector> pts;
  for (int i = 0; i < count; ++i) pts.push_back(random_vector(rng, n) + shift);
  return pts;
}

double analytic_support(const altmin::OracleSet& set, const Vector& c) {
  using namespace altmin;
  const Geometry& g = set.geometry();
  if (const auto* b = std::get_if<Box>(&g)) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) s += c[i] >= 0 ? c[i] * b->lower[i] : c[i] * b->upper[i];
    return s;
  }
  if (const auto* b = std::get_if<Ball>(&g)) return c.dot(b->center) - b->radius * c.norm();
  if (const auto* s = std::get_if<Simplex>(&g)) return s->scale * c.minCoeff();
  if (const auto* l = std::get_if<L1Ball>(&g)) return c.dot(l->center) - l->radius * c.lpNorm<Eigen::Infinity>();
  return brute_vertex_min(std::get<VPolytope>(g).vertices, c).second;
}

}  // namespace testing_support

namespace testing_support {

bool identical_rows(const altmin::IterateTrace& a, const altmin::IterateTrace& b, std::string* where) {
  auto fail = [&](const std::string& what) {
    if (where) *where = what;
    return false;
  };
  if (a.rows.size() != b.rows.size()) return fail("row counts differ");
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& r = a.rows[i];
    const auto& s = b.rows[i];
    const std::string at = " at row " + std::to_string(i);
    if (r.t != s.t || r.block != s.block) return fail("index" + at);
    if (r.objective != s.objective) return fail("objective" + at);
    if (r.block_gap != s.block_gap) return fail("block_gap" + at);
    if (r.full_gap != s.full_gap) return fail("full_gap" + at);
    if (r.gamma != s.gamma) return fail("gamma" + at);
    if (r.lmo_calls != s.lmo_calls) return fail("lmo_calls" + at);
  }
  if (a.lmo_outputs.size() != b.lmo_outputs.size()) return fail("lmo output counts differ");
  for (std::size_t i = 0; i < a.lmo_outputs.size(); ++i) {
    if (a.lmo_outputs[i] != b.lmo_outputs[i]) return fail("lmo output at row " + std::to_string(i));
  }
  return true;
}

Vector random_feasible(const altmin::OracleSet& set, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x = Vector::Zero(set.dimension());
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double w = unit(rng) + 1e-3;
    x += w * set.lmo(random_vector(rng, set.dimension()));
    total += w;
  }
  return x / total;
}

}  // namespace testing_support
