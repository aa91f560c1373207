#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP
// version that must agree with it exactly (same index, same value).

#include <Eigen/Core>

#include <cstddef>

namespace altmin::kernels {

/// Vertex counts at or above this use the OpenMP argmin.
inline constexpr Eigen::Index kParallelMinVertices = 4096;

struct ArgminResult {
  Eigen::Index index;
  double value;
};

/// Lowest column j with <c, V_j> <= min_k <c, V_k> + rel_tol * max_k |<c, V_k>|.
ArgminResult vertex_argmin_serial(const Eigen::MatrixXd& vertices,
                                  const Eigen::VectorXd& c, double rel_tol);
ArgminResult vertex_argmin_parallel(const Eigen::MatrixXd& vertices,
                                    const Eigen::VectorXd& c, double rel_tol);
ArgminResult vertex_argmin(const Eigen::MatrixXd& vertices,
                           const Eigen::VectorXd& c, double rel_tol);

/// max_{i<j} ||V_i - V_j||.
double max_pairwise_distance_serial(const Eigen::MatrixXd& vertices);
double max_pairwise_distance_parallel(const Eigen::MatrixXd& vertices);
double max_pairwise_distance(const Eigen::MatrixXd& vertices);

/// Number of threads OpenMP would use (1 when built without OpenMP).
int max_threads();

}  // namespace altmin::kernels
