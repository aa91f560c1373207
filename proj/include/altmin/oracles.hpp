#pragma once

// Compact convex sets accessed through a linear minimization oracle.
//
// Every geometry here is compact and convex by construction, immutable once
// built, and safe to share across threads. The LMO is deterministic: ties are
// broken toward the lowest-index vertex (V-polytope), the lexicographically
// smallest corner (box) or the lowest-index basis direction (simplex, l1-ball).

#include <Eigen/Core>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "altmin/error.hpp"

namespace altmin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Relative tolerance under which two LMO candidates count as tied.
inline constexpr double kTieTolerance = 1e-12;
/// Euclidean radius under which two V-polytope vertices are merged.
inline constexpr double kDedupTolerance = 1e-9;

struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius;
};

/// {x >= 0, sum(x) = scale}; vertices are scale * e_i.
struct Simplex {
  Eigen::Index dimension;
  double scale;
};

struct L1Ball {
  Vector center;
  double radius;
};

/// Convex hull of the columns of `vertices` (deduplicated).
struct VPolytope {
  Matrix vertices;
  double diameter;
};

using Geometry = std::variant<Box, Ball, Simplex, L1Ball, VPolytope>;

enum class SetKind { Box, Ball, Simplex, L1Ball, VPolytope };

std::string_view to_string(SetKind kind);

struct LmoResult {
  Vector point;
  /// Column index of the returned vertex for V-polytopes.
  std::optional<Eigen::Index> vertex;
};

class OracleSet {
 public:
  static OracleSet box(Vector lower, Vector upper);
  static OracleSet ball(Vector center, double radius);
  static OracleSet simplex(Eigen::Index dimension, double scale = 1.0);
  static OracleSet l1_ball(Vector center, double radius);
  /// Duplicates within kDedupTolerance keep their first occurrence.
  static OracleSet vpolytope(const std::vector<Vector>& vertices);
  static OracleSet vpolytope(const Matrix& vertices);
  static OracleSet vpolytope(std::initializer_list<Vector> vertices);

  Eigen::Index dimension() const;
  SetKind kind() const;
  const Geometry& geometry() const { return geometry_; }

  /// argmin over the set of <c, x>. Throws DimensionError / NonFiniteError.
  Vector lmo(const Vector& c) const;
  LmoResult lmo_indexed(const Vector& c) const;

  /// min over the set of <c, x>, evaluated at lmo(c).
  double support(const Vector& c) const;

  bool has_projection() const;
  /// Euclidean projection. Box, Ball and Simplex only; UnsupportedOperation
  /// otherwise.
  Vector project(const Vector& z) const;

  /// Exact Euclidean diameter.
  double diameter() const;

  /// True for geometries whose LMO always returns one of finitely many
  /// vertices (everything except Ball).
  bool is_polytope() const;

  /// Vertex columns; only available for V-polytopes.
  const Matrix* vertices() const;

 private:
  explicit OracleSet(Geometry g) : geometry_(std::move(g)) {}

  Geometry geometry_;
};

/// min over x in P, y in Q of <g, x - y>, using exactly two LMO calls.
double support_gap(const OracleSet& p, const OracleSet& q, const Vector& g);

/// Euclidean projection of z onto {x >= 0, sum(x) = scale} (sort-based).
Vector project_onto_simplex(const Vector& z, double scale = 1.0);

void require_finite(const Vector& v, const char* what);
void require_same_dimension(const Vector& a, const Vector& b, const char* what);

}  // namespace altmin
