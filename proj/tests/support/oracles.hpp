#pragma once

// Reference computations for the tests. Deliberately naive: no shared code
// paths with the library beyond the set/LMO types.

#include <cstdint>
#include <functional>
#include <string>
#include <random>
#include <vector>

#include "altmin/cbcg.hpp"
#include "altmin/oracles.hpp"

namespace testing_support {

using altmin::Matrix;
using altmin::Vector;

/// Smallest <c, V_j> and the first column attaining it exactly.
std::pair<Eigen::Index, double> brute_vertex_min(const Matrix& vertices, const Vector& c);

/// Textbook Frank-Wolfe on a single set.
struct FwStep {
  Vector lmo_output;
  Vector iterate;
  double gamma;
  double objective;
  double gap;
};
std::vector<FwStep> vanilla_frank_wolfe(const std::function<double(const Vector&)>& f,
                                        const std::function<Vector(const Vector&)>& grad,
                                        const altmin::OracleSet& set, Vector x, std::size_t iterations,
                                        altmin::StepRule rule, double smoothness);

/// Euclidean distance from p to the segment [a, b].
double point_segment_distance(const Vector& p, const Vector& a, const Vector& b);
/// Distance between the 2D segments [a, b] and [c, d] (0 when they cross).
double segment_segment_distance_2d(const Vector& a, const Vector& b, const Vector& c, const Vector& d);

/// Projection onto the 3-simplex by exhaustive search over a grid of step h.
Vector grid_simplex_projection(const Vector& z, double h);

/// Central differences.
Vector finite_difference(const std::function<double(const Vector&)>& f, const Vector& x, double h);

Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0);
std::vector<Vector> random_points(std::mt19937_64& rng, int count, Eigen::Index n, const Vector& shift);

/// min over the set of <c, x> from a closed form / vertex scan.
double analytic_support(const altmin::OracleSet& set, const Vector& c);

}  // namespace testing_support

namespace testing_support {

/// Exact (bitwise) equality of two traces' rows; on mismatch `where` names the first difference.
bool identical_rows(const altmin::IterateTrace& a, const altmin::IterateTrace& b, std::string* where = nullptr);

/// A random feasible point: convex combination of LMO outputs for random directions.
Vector random_feasible(const altmin::OracleSet& set, std::mt19937_64& rng);

}  // namespace testing_support
