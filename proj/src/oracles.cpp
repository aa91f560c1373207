#include "altmin/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "altmin/kernels.hpp"

namespace altmin {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be finite and > 0");
  }
}

void check_direction(const OracleSet& set, const Vector& c) {
  if (c.size() != set.dimension()) {
    throw DimensionError("lmo: direction has dimension " +
                         std::to_string(c.size()) + ", set has " +
                         std::to_string(set.dimension()));
  }
  require_finite(c, "lmo direction");
}

Vector box_lmo(const Box& b, const Vector& c) {
  const double tol = kTieTolerance * c.cwiseAbs().maxCoeff();
  Vector v(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    // A zero (tied) coordinate takes the lower bound: lexicographically smallest.
    v[i] = (c[i] < -tol) ? b.upper[i] : b.lower[i];
  }
  return v;
}

Vector ball_lmo(const Ball& b, const Vector& c) {
  const double m = c.cwiseAbs().maxCoeff();
  Vector v = b.center;
  if (m == 0.0) {
    v[0] -= b.radius;
    return v;
  }
  const Vector u = c / m;
  return b.center - (b.radius / u.norm()) * u;
}

Vector simplex_lmo(const Simplex& s, const Vector& c) {
  const double best = c.minCoeff();
  const double tol = kTieTolerance * c.cwiseAbs().maxCoeff();
  Eigen::Index i = 0;
  while (c[i] > best + tol) ++i;
  Vector v = Vector::Zero(s.dimension);
  v[i] = s.scale;
  return v;
}

Vector l1_lmo(const L1Ball& b, const Vector& c) {
  const Vector a = c.cwiseAbs();
  const double top = a.maxCoeff();
  const double tol = kTieTolerance * top;
  Eigen::Index i = 0;
  while (a[i] < top - tol) ++i;
  Vector v = b.center;
  // c_i >= 0 (including the all-zero tie) moves down the axis.
  v[i] += (c[i] < 0.0) ? b.radius : -b.radius;
  return v;
}

}  // namespace

std::string_view to_string(SetKind kind) {
  switch (kind) {
    case SetKind::Box:
      return "box";
    case SetKind::Ball:
      return "ball";
    case SetKind::Simplex:
      return "simplex";
    case SetKind::L1Ball:
      return "l1ball";
    case SetKind::VPolytope:
      return "vpolytope";
  }
  return "unknown";
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw NonFiniteError(std::string(what) + " contains NaN or Inf");
}

void require_same_dimension(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": dimension " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

OracleSet OracleSet::box(Vector lower, Vector upper) {
  require_same_dimension(lower, upper, "box bounds");
  if (lower.size() == 0) throw InvalidArgument("box must have dimension >= 1");
  require_finite(lower, "box lower bound");
  require_finite(upper, "box upper bound");
  if ((lower.array() > upper.array()).any()) {
    throw InvalidArgument("box requires lower <= upper componentwise");
  }
  return OracleSet(Box{std::move(lower), std::move(upper)});
}

OracleSet OracleSet::ball(Vector center, double radius) {
  if (center.size() == 0) throw InvalidArgument("ball must have dimension >= 1");
  require_finite(center, "ball center");
  require_positive(radius, "ball radius");
  return OracleSet(Ball{std::move(center), radius});
}

OracleSet OracleSet::simplex(Eigen::Index dimension, double scale) {
  if (dimension < 1) throw InvalidArgument("simplex dimension must be >= 1");
  require_positive(scale, "simplex scale");
  return OracleSet(Simplex{dimension, scale});
}

OracleSet OracleSet::l1_ball(Vector center, double radius) {
  if (center.size() == 0) throw InvalidArgument("l1 ball must have dimension >= 1");
  require_finite(center, "l1 ball center");
  require_positive(radius, "l1 ball radius");
  return OracleSet(L1Ball{std::move(center), radius});
}

OracleSet OracleSet::vpolytope(const std::vector<Vector>& vertices) {
  if (vertices.empty()) throw InvalidArgument("vpolytope needs at least one vertex");
  const Eigen::Index n = vertices.front().size();
  if (n == 0) throw InvalidArgument("vpolytope must have dimension >= 1");
  std::vector<const Vector*> kept;
  for (const Vector& v : vertices) {
    require_same_dimension(vertices.front(), v, "vpolytope vertex");
    require_finite(v, "vpolytope vertex");
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Vector* k) {
      return (*k - v).norm() <= kDedupTolerance;
    });
    if (!duplicate) kept.push_back(&v);
  }
  Matrix m(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = *kept[j];
  const double d = kernels::max_pairwise_distance(m);
  return OracleSet(VPolytope{std::move(m), d});
}

OracleSet OracleSet::vpolytope(const Matrix& vertices) {
  std::vector<Vector> cols;
  cols.reserve(static_cast<std::size_t>(vertices.cols()));
  for (Eigen::Index j = 0; j < vertices.cols(); ++j) cols.emplace_back(vertices.col(j));
  return vpolytope(cols);
}

OracleSet OracleSet::vpolytope(std::initializer_list<Vector> vertices) {
  return vpolytope(std::vector<Vector>(vertices));
}

Eigen::Index OracleSet::dimension() const {
  return std::visit(overloaded{
                        [](const Box& b) { return b.lower.size(); },
                        [](const Ball& b) { return b.center.size(); },
                        [](const Simplex& s) { return s.dimension; },
                        [](const L1Ball& b) { return b.center.size(); },
                        [](const VPolytope& p) { return p.vertices.rows(); },
                    },
                    geometry_);
}

SetKind OracleSet::kind() const { return static_cast<SetKind>(geometry_.index()); }

LmoResult OracleSet::lmo_indexed(const Vector& c) const {
  check_direction(*this, c);
  return std::visit(overloaded{
                        [&](const Box& b) { return LmoResult{box_lmo(b, c), {}}; },
                        [&](const Ball& b) { return LmoResult{ball_lmo(b, c), {}}; },
                        [&](const Simplex& s) { return LmoResult{simplex_lmo(s, c), {}}; },
                        [&](const L1Ball& b) { return LmoResult{l1_lmo(b, c), {}}; },
                        [&](const VPolytope& p) {
                          const auto r = kernels::vertex_argmin(p.vertices, c, kTieTolerance);
                          return LmoResult{p.vertices.col(r.index), r.index};
                        },
                    },
                    geometry_);
}

Vector OracleSet::lmo(const Vector& c) const { return lmo_indexed(c).point; }

double OracleSet::support(const Vector& c) const { return c.dot(lmo(c)); }

bool OracleSet::has_projection() const {
  const SetKind k = kind();
  return k == SetKind::Box || k == SetKind::Ball || k == SetKind::Simplex;
}

Vector OracleSet::project(const Vector& z) const {
  if (z.size() != dimension()) {
    throw DimensionError("project: point has dimension " + std::to_string(z.size()) +
                         ", set has " + std::to_string(dimension()));
  }
  require_finite(z, "projection input");
  return std::visit(
      overloaded{
          [&](const Box& b) -> Vector { return z.cwiseMax(b.lower).cwiseMin(b.upper); },
          [&](const Ball& b) -> Vector {
            const Vector r = z - b.center;
            const double len = r.norm();
            if (len <= b.radius) return z;
            return b.center + (b.radius / len) * r;
          },
          [&](const Simplex& s) -> Vector { return project_onto_simplex(z, s.scale); },
          [&](const L1Ball&) -> Vector {
            throw UnsupportedOperation(
                "projection onto an l1 ball is not provided; use an LMO-based solver");
          },
          [&](const VPolytope&) -> Vector {
            throw UnsupportedOperation(
                "projection onto a V-polytope is not provided; use an LMO-based solver");
          },
      },
      geometry_);
}

double OracleSet::diameter() const {
  return std::visit(overloaded{
                        [](const Box& b) { return (b.upper - b.lower).norm(); },
                        [](const Ball& b) { return 2.0 * b.radius; },
                        [](const Simplex& s) {
                          return s.dimension == 1 ? 0.0 : s.scale * std::sqrt(2.0);
                        },
                        [](const L1Ball& b) { return 2.0 * b.radius; },
                        [](const VPolytope& p) { return p.diameter; },
                    },
                    geometry_);
}

bool OracleSet::is_polytope() const { return kind() != SetKind::Ball; }

const Matrix* OracleSet::vertices() const {
  if (const auto* p = std::get_if<VPolytope>(&geometry_)) return &p->vertices;
  return nullptr;
}

double support_gap(const OracleSet& p, const OracleSet& q, const Vector& g) {
  if (p.dimension() != q.dimension()) {
    throw DimensionError("support_gap: sets live in different dimensions");
  }
  const Vector x = p.lmo(g);
  const Vector y = q.lmo(-g);
  return g.dot(x) - g.dot(y);
}

Vector project_onto_simplex(const Vector& z, double scale) {
  std::vector<double> u(z.data(), z.data() + z.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - scale) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  return (z.array() - theta).cwiseMax(0.0).matrix();
}

}  // namespace altmin
