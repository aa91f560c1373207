#include "doctest.h"

#include <random>

#include "altmin/kernels.hpp"
#include "support/oracles.hpp"

namespace k = altmin::kernels;
namespace ts = testing_support;
using altmin::Matrix;
using altmin::Vector;

namespace {

Matrix cloud(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index count) {
  Matrix m(dim, count);
  for (Eigen::Index j = 0; j < count; ++j) m.col(j) = ts::random_vector(rng, dim);
  return m;
}

}  // namespace

TEST_CASE("parallel argmin agrees with the serial reference") {
  std::mt19937_64 rng(1);
  for (Eigen::Index count : {1, 7, 5000, 20000}) {
    const Matrix v = cloud(rng, 5, count);
    for (int i = 0; i < 20; ++i) {
      const Vector c = ts::random_vector(rng, 5);
      const auto s = k::vertex_argmin_serial(v, c, 1e-12);
      const auto p = k::vertex_argmin_parallel(v, c, 1e-12);
      CHECK(s.index == p.index);
      CHECK(s.value == p.value);
      CHECK(s.index == ts::brute_vertex_min(v, c).first);
    }
  }
}

TEST_CASE("argmin ties resolve to the lowest index in both versions") {
  Matrix v(2, 6000);
  for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j) << static_cast<double>(j % 3), 1.0;
  const Vector c = (Vector(2) << 0.0, 1.0).finished();
  CHECK(k::vertex_argmin_serial(v, c, 1e-12).index == 0);
  CHECK(k::vertex_argmin_parallel(v, c, 1e-12).index == 0);
  const Vector c2 = (Vector(2) << 1.0, 0.0).finished();
  CHECK(k::vertex_argmin_parallel(v, c2, 1e-12).index == 0);
  CHECK(k::vertex_argmin_serial(v, -c2, 1e-12).index == 2);
  CHECK(k::vertex_argmin_parallel(v, -c2, 1e-12).index == 2);
}

TEST_CASE("parallel diameter agrees with the serial reference") {
  std::mt19937_64 rng(2);
  for (Eigen::Index count : {1, 2, 50, 600}) {
    const Matrix v = cloud(rng, 4, count);
    const double s = k::max_pairwise_distance_serial(v);
    CHECK(s == k::max_pairwise_distance_parallel(v));
    CHECK(s == k::max_pairwise_distance(v));
  }
  Matrix seg(2, 2);
  seg << 0, 3, 0, 4;
  CHECK(k::max_pairwise_distance_serial(seg) == 5.0);
}

TEST_CASE("thread count is positive") { CHECK(k::max_threads() >= 1); }
