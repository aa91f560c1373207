#include "altmin/instances.hpp"

#include <cmath>
#include <initializer_list>
#include <random>

#include "altmin/feasibility.hpp"

namespace altmin {

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

std::vector<Vector> random_cloud(std::mt19937_64& rng, int count, int dim, const Vector& shift) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vector> pts;
  for (int i = 0; i < count; ++i) {
    Vector v(dim);
    for (int d = 0; d < dim; ++d) v[d] = unit(rng);
    pts.push_back(v + shift);
  }
  return pts;
}

PairInstance pair(std::string name, OracleSet p, OracleSet q, double distance,
                  std::optional<Vector> xs = std::nullopt, std::optional<Vector> ys = std::nullopt) {
  return PairInstance{std::move(name), std::move(p), std::move(q), distance, std::move(xs), std::move(ys)};
}

}  // namespace

double PairInstance::diameter_sq() const {
  const double dp = p.diameter();
  const double dq = q.diameter();
  return dp * dp + dq * dq;
}

std::vector<PairInstance> pair_suite() {
  const double s2 = std::sqrt(2.0);
  std::vector<PairInstance> out;

  // Intersecting.
  out.push_back(pair("box-box-overlap", OracleSet::box(vec({0, 0}), vec({2, 2})),
                     OracleSet::box(vec({1, 1}), vec({3, 2})), 0.0));
  out.push_back(pair("ball-ball-overlap", OracleSet::ball(vec({0, 0}), 1.0),
                     OracleSet::ball(vec({1, 0}), 1.0), 0.0));
  out.push_back(pair("simplex-box-overlap", OracleSet::simplex(3),
                     OracleSet::box(vec({0, 0, 0}), vec({0.5, 0.5, 0.5})), 0.0));
  out.push_back(pair("ball-box-overlap", OracleSet::ball(vec({0, 0}), 1.0),
                     OracleSet::box(vec({0.5, -1}), vec({2, 1})), 0.0));
  out.push_back(pair("vpolytope-triangle-segment",
                     OracleSet::vpolytope({vec({0, 0}), vec({2, 0}), vec({0, 2})}),
                     OracleSet::vpolytope({vec({1, 1}), vec({3, 1})}), 0.0));
  out.push_back(pair("vpolytope-ball-overlap-3d",
                     OracleSet::vpolytope({vec({0, 0, 0}), vec({2, 0, 0}), vec({0, 2, 0}), vec({0, 0, 2})}),
                     OracleSet::ball(vec({1, 1, 1}), 1.0), 0.0));
  {
    std::mt19937_64 rng(7);
    auto a = random_cloud(rng, 5, 3, Vector::Zero(3));
    auto b = random_cloud(rng, 5, 3, vec({0.3, 0.1, 0.0}));
    PairInstance inst = pair("vpolytope-random-overlap-3d", OracleSet::vpolytope(a), OracleSet::vpolytope(b), 0.0);
    inst.distance = hull_distance(a, b);
    out.push_back(std::move(inst));
  }

  // Disjoint.
  out.push_back(pair("box-box-gap", OracleSet::box(vec({0, 0}), vec({1, 1})),
                     OracleSet::box(vec({2, 0}), vec({3, 1})), 1.0));
  out.push_back(pair("ball-ball-gap", OracleSet::ball(vec({0, 0}), 1.0), OracleSet::ball(vec({3, 0}), 1.0), 1.0,
                     vec({1, 0}), vec({2, 0})));
  out.push_back(pair("simplex-box-gap", OracleSet::simplex(2), OracleSet::box(vec({1, 1}), vec({2, 2})), s2 / 2.0,
                     vec({0.5, 0.5}), vec({1, 1})));
  out.push_back(pair("vpolytope-segments-gap", OracleSet::vpolytope({vec({0, 0}), vec({1, 0})}),
                     OracleSet::vpolytope({vec({0, 1}), vec({1, 2})}), 1.0, vec({0, 0}), vec({0, 1})));
  out.push_back(pair("vpolytope-ball-gap", OracleSet::vpolytope({vec({0, 0}), vec({1, 0}), vec({0, 1})}),
                     OracleSet::ball(vec({2, 2}), 1.0), 3.0 / s2 - 1.0, vec({0.5, 0.5}),
                     vec({2.0 - 1.0 / s2, 2.0 - 1.0 / s2})));
  out.push_back(pair("l1ball-box-gap-3d", OracleSet::l1_ball(vec({0, 0, 0}), 1.0),
                     OracleSet::box(vec({1, 1, 1}), vec({2, 2, 2})), 2.0 / std::sqrt(3.0),
                     vec({1.0 / 3, 1.0 / 3, 1.0 / 3}), vec({1, 1, 1})));
  out.push_back(pair("box-ball-gap-3d", OracleSet::box(vec({0, 0, 0}), vec({1, 1, 1})),
                     OracleSet::ball(vec({3, 0.5, 0.5}), 1.0), 1.0, vec({1, 0.5, 0.5}), vec({2, 0.5, 0.5})));
  out.push_back(pair("simplex-ball-gap-3d", OracleSet::simplex(3, 3.0), OracleSet::ball(vec({0, 0, 0}), 1.0),
                     std::sqrt(3.0) - 1.0, vec({1, 1, 1}), Vector::Constant(3, 1.0 / std::sqrt(3.0))));
  {
    std::mt19937_64 rng(11);
    auto a = random_cloud(rng, 5, 3, Vector::Zero(3));
    auto b = random_cloud(rng, 5, 3, vec({1.5, 0.3, 0.0}));
    PairInstance inst = pair("vpolytope-random-gap-3d", OracleSet::vpolytope(a), OracleSet::vpolytope(b), 0.0);
    inst.distance = hull_distance(a, b);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<BlockInstance> block_suite() {
  std::vector<BlockInstance> out;
  auto default_start = [](const std::vector<OracleSet>& blocks) {
    std::vector<Vector> start;
    for (const OracleSet& b : blocks) start.push_back(b.lmo(Vector::Ones(b.dimension())));
    return start;
  };

  {
    // 1/2 ||z - c||^2 over the simplex; the projection of c is (0.65, 0.35, 0).
    const Vector c = vec({0.8, 0.5, -0.2});
    std::vector<OracleSet> blocks{OracleSet::simplex(3)};
    auto start = default_start(blocks);
    out.push_back({"k1-simplex-projection",
                   quadratic_problem(blocks, Matrix::Identity(3, 3), -c, 0.5 * c.squaredNorm()), start,
                   0.5 * (0.15 * 0.15 + 0.15 * 0.15 + 0.2 * 0.2)});
  }
  {
    // 1/2 (z1^2 + 4 z2^2) - 2 z1 - 8 z2 over [-1, 1]^2: minimizer clamps to (1, 1).
    Matrix h = Vector(vec({1, 4})).asDiagonal();
    std::vector<OracleSet> blocks{OracleSet::box(vec({-1, -1}), vec({1, 1}))};
    auto start = default_start(blocks);
    out.push_back({"k1-box-anisotropic", quadratic_problem(blocks, h, vec({-2, -8})), start, -7.5});
  }
  {
    std::vector<OracleSet> blocks{OracleSet::ball(vec({0, 0}), 1.0), OracleSet::ball(vec({3, 0}), 1.0)};
    auto start = default_start(blocks);
    out.push_back({"k2-balls-distance", squared_distance_problem(blocks[0], blocks[1]), start, 1.0});
  }
  {
    std::vector<OracleSet> blocks{OracleSet::box(vec({1, 1}), vec({2, 2})), OracleSet::simplex(2)};
    auto start = default_start(blocks);
    out.push_back({"k2-box-simplex-distance", squared_distance_problem(blocks[0], blocks[1]), start, 0.5});
  }
  {
    // (x1 - x2)^2 + (x2 - x3)^2 on [0,1] x [2,3] x [4,5]: optimum at (1, 2.5, 4).
    Matrix h(3, 3);
    h << 2, -2, 0, -2, 4, -2, 0, -2, 2;
    std::vector<OracleSet> blocks{OracleSet::box(vec({0}), vec({1})), OracleSet::box(vec({2}), vec({3})),
                                  OracleSet::box(vec({4}), vec({5}))};
    auto start = default_start(blocks);
    out.push_back({"k3-interval-chain", quadratic_problem(blocks, h, Vector::Zero(3)), start, 4.5});
  }
  {
    // sum_i 1/2 ||x_i - c_i||^2 with projections (0.5, 0.5), (1, 0.5) and
    // (3, 4) - (0.6, 0.8): squared distances 0.5, 1 and 16.
    const Vector c = vec({1, 1, 2, 0.5, 0, 0});
    std::vector<OracleSet> blocks{OracleSet::simplex(2), OracleSet::box(vec({0, 0}), vec({1, 1})),
                                  OracleSet::ball(vec({3, 4}), 1.0)};
    auto start = default_start(blocks);
    out.push_back({"k3-separable-mixed",
                   quadratic_problem(blocks, Matrix::Identity(6, 6), -c, 0.5 * c.squaredNorm()), start,
                   0.5 * (0.5 + 1.0 + 16.0)});
  }
  return out;
}

std::vector<PocsInstance> pocs_suite() {
  const double s2 = std::sqrt(2.0);
  std::vector<PocsInstance> out;

  out.push_back({"balls-gap-axis", OracleSet::ball(vec({0, 0}), 1.0), OracleSet::ball(vec({3, 0}), 1.0),
                 vec({3, 0}), vec({1, 0}), 1.0, 1.0, vec({2, 0})});
  out.push_back({"balls-gap-offset", OracleSet::ball(vec({0, 0}), 1.0), OracleSet::ball(vec({3, 0}), 1.0),
                 vec({2, 0.5}), vec({1, 0}), 0.5, 1.0, vec({2, 0})});
  {
    const Vector ys = vec({2.0 - 1.0 / s2, 2.0 - 1.0 / s2});
    const Vector xs = vec({0.5, 0.5});
    const Vector y0 = vec({4, 2});
    out.push_back({"simplex-ball-gap", OracleSet::simplex(2), OracleSet::ball(vec({2, 2}), 1.0), y0, ys - xs,
                   (y0 - ys).norm(), (ys - xs).norm(), ys});
  }
  {
    // Q_min is the left face {2} x [0, 1]; (4, 3) lands on its corner (2, 1).
    out.push_back({"boxes-gap", OracleSet::box(vec({0, 0}), vec({1, 1})), OracleSet::box(vec({2, 0}), vec({3, 1})),
                   vec({4, 3}), vec({1, 0}), 2.0 * s2, 1.0, vec({2, 1})});
  }
  // Intersecting.
  out.push_back({"balls-lens", OracleSet::ball(vec({0, 0}), 1.0), OracleSet::ball(vec({1, 0}), 1.0), vec({1, 1}),
                 std::nullopt, s2 - 1.0, 0.0, std::nullopt});
  out.push_back({"boxes-overlap", OracleSet::box(vec({0, 0}), vec({2, 2})), OracleSet::box(vec({1, 1}), vec({3, 3})),
                 vec({3, -1}), std::nullopt, std::sqrt(5.0), 0.0, std::nullopt});
  out.push_back({"simplex-box-overlap-3d", OracleSet::simplex(3),
                 OracleSet::box(vec({0, 0, 0}), vec({0.5, 0.5, 0.5})), vec({2, 0, 0}), std::nullopt,
                 std::sqrt(2.375), 0.0, std::nullopt});
  out.push_back({"box-ball-overlap-3d", OracleSet::box(vec({0, 0, 0}), vec({1, 1, 1})),
                 OracleSet::ball(vec({1.5, 0.5, 0.5}), 1.0), vec({3, 0.5, 0.5}), std::nullopt, 2.0, 0.0,
                 std::nullopt});
  out.push_back({"start-in-intersection", OracleSet::ball(vec({0, 0}), 1.0), OracleSet::ball(vec({1, 0}), 1.0),
                 vec({0.5, 0}), std::nullopt, 0.0, 0.0, std::nullopt});
  return out;
}

std::vector<PairInstance> adaptive_suite() {
  std::vector<PairInstance> out;
  out.push_back(pair("triangle-segment-touch", OracleSet::vpolytope({vec({0, 0}), vec({2, 0}), vec({0, 2})}),
                     OracleSet::vpolytope({vec({1, 1}), vec({3, 1})}), 0.0));
  out.push_back(pair("triangles-overlap", OracleSet::vpolytope({vec({0, 0}), vec({2, 0}), vec({0, 2})}),
                     OracleSet::vpolytope({vec({1, 0.5}), vec({3, 0.5}), vec({1, 2.5})}), 0.0));
  out.push_back(pair("square-diamond", OracleSet::vpolytope({vec({0, 0}), vec({2, 0}), vec({2, 2}), vec({0, 2})}),
                     OracleSet::vpolytope({vec({1, -1}), vec({3, 1}), vec({1, 3}), vec({-1, 1})}), 0.0));
  out.push_back(pair("tetrahedra-overlap-3d",
                     OracleSet::vpolytope({vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})}),
                     OracleSet::vpolytope({vec({0.2, 0.2, 0.2}), vec({1.2, 0.2, 0.2}), vec({0.2, 1.2, 0.2}),
                                           vec({0.2, 0.2, 1.2})}),
                     0.0));
  out.push_back(pair("segment-pierces-triangle-3d",
                     OracleSet::vpolytope({vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})}),
                     OracleSet::vpolytope({vec({0, 0, 0}), vec({1, 1, 1})}), 0.0));
  out.push_back(pair("triangles-share-vertex", OracleSet::vpolytope({vec({0, 0}), vec({1, 0}), vec({0, 1})}),
                     OracleSet::vpolytope({vec({1, 0}), vec({2, 0}), vec({2, 1})}), 0.0));
  out.push_back(pair("crossing-segments-4d", OracleSet::vpolytope({vec({0, 0, 0, 0}), vec({2, 2, 0, 0})}),
                     OracleSet::vpolytope({vec({2, 0, 0, 0}), vec({0, 2, 0, 0})}), 0.0));
  return out;
}

}  // namespace altmin
