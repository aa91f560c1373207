#include "altmin/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace altmin::kernels {

namespace {

// Shared by both argmin paths so that the candidate values are bitwise equal.
inline double column_dot(const Eigen::MatrixXd& v, Eigen::Index j,
                         const Eigen::VectorXd& c) {
  return v.col(j).dot(c);
}

}  // namespace

ArgminResult vertex_argmin_serial(const Eigen::MatrixXd& vertices,
                                  const Eigen::VectorXd& c, double rel_tol) {
  const Eigen::Index m = vertices.cols();
  std::vector<double> values(static_cast<std::size_t>(m));
  double best = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double v = column_dot(vertices, j, c);
    values[j] = v;
    best = std::min(best, v);
    scale = std::max(scale, std::abs(v));
  }
  const double threshold = best + rel_tol * scale;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (values[j] <= threshold) return {j, values[j]};
  }
  return {0, values.empty() ? 0.0 : values[0]};
}

ArgminResult vertex_argmin_parallel(const Eigen::MatrixXd& vertices,
                                    const Eigen::VectorXd& c, double rel_tol) {
  const Eigen::Index m = vertices.cols();
  std::vector<double> values(static_cast<std::size_t>(m));
  double best = std::numeric_limits<double>::infinity();
  double scale = 0.0;

#pragma omp parallel for schedule(static) reduction(min : best) reduction(max : scale)
  for (Eigen::Index j = 0; j < m; ++j) {
    const double v = column_dot(vertices, j, c);
    values[j] = v;
    best = std::min(best, v);
    scale = std::max(scale, std::abs(v));
  }

  const double threshold = best + rel_tol * scale;
  Eigen::Index first = m;
#pragma omp parallel for schedule(static) reduction(min : first)
  for (Eigen::Index j = 0; j < m; ++j) {
    if (values[j] <= threshold) first = std::min(first, j);
  }
  if (first == m) first = 0;
  return {first, m > 0 ? values[first] : 0.0};
}

ArgminResult vertex_argmin(const Eigen::MatrixXd& vertices,
                           const Eigen::VectorXd& c, double rel_tol) {
  if (vertices.cols() >= kParallelMinVertices) {
    return vertex_argmin_parallel(vertices, c, rel_tol);
  }
  return vertex_argmin_serial(vertices, c, rel_tol);
}

double max_pairwise_distance_serial(const Eigen::MatrixXd& vertices) {
  const Eigen::Index m = vertices.cols();
  double best = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      best = std::max(best, (vertices.col(i) - vertices.col(j)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

double max_pairwise_distance_parallel(const Eigen::MatrixXd& vertices) {
  const Eigen::Index m = vertices.cols();
  double best = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      best = std::max(best, (vertices.col(i) - vertices.col(j)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

double max_pairwise_distance(const Eigen::MatrixXd& vertices) {
  if (vertices.cols() >= kParallelMinVertices / 16) {
    return max_pairwise_distance_parallel(vertices);
  }
  return max_pairwise_distance_serial(vertices);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace altmin::kernels
