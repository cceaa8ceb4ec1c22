#pragma once

// Small-dimension geometric primitives for simplicial cones and their
// hyperplane cross-sections.
//
// Conventions: a hyperplane is stored through its normal b and stands for
// {x : (b, x) = 1}; a cone is stored as a matrix whose columns are its unit
// generators. Points are plain dynamic Eigen vectors.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coneslice/errors.hpp"

namespace coneslice {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace tol {
/// Minimum |det E| of the unit-normalized generator matrix.
inline constexpr double rank = 1e-10;
/// (b, e_i) at or below this value makes a hyperplane non-admissible.
inline constexpr double admissible = 1e-12;
/// Slack for non-strict predicate comparisons.
inline constexpr double predicate = 1e-10;
/// Condition number above which circumcenter results are flagged.
inline constexpr double circumcenter_condition = 1e8;
}  // namespace tol

/// Dimension above which volumes are accumulated in the log domain.
inline constexpr int kLogDomainDimension = 20;

/// Pointed full-dimensional simplicial cone spanned by n linearly
/// independent generators.
class Hyperangle {
 public:
  /// Generators are normalized to unit length. Throws Degenerate when the
  /// normalized generator matrix is (numerically) singular and
  /// DimensionMismatch when the count differs from the ambient dimension.
  static Hyperangle from_generators(std::span<const Point> generators);
  static Hyperangle from_columns(const Matrix& columns);

  static Hyperangle orthant(int n);
  /// Planar angle with rays at polar angles 0 and alpha.
  static Hyperangle angle2d(double alpha_radians);

  int dimension() const { return static_cast<int>(generators_.cols()); }
  const Matrix& generators() const { return generators_; }
  Eigen::Ref<const Point> generator(int i) const { return generators_.col(i); }
  double abs_det() const { return abs_det_; }

  /// Coordinates of x in the generator basis: x = sum alpha_i e_i.
  Point coordinates(const Point& x) const;
  /// Columns f_j with (f_j, e_i) = delta_ij; they span the dual cone.
  Matrix dual_generators() const;
  Hyperangle dual() const;

 private:
  Hyperangle(Matrix generators, double abs_det);

  Matrix generators_;
  double abs_det_;
};

struct Hyperplane {
  Point normal;

  int dimension() const { return static_cast<int>(normal.size()); }
  /// Plane {x : (b,x) = 1} through the points x_i e_i of the given intercepts.
  static Hyperplane from_intercepts(const Hyperangle& cone, const Point& intercepts);
};

/// The (n-1)-simplex cut from a cone by an admissible hyperplane.
struct Section {
  Hyperangle cone;
  Hyperplane plane;
  /// A_i = x_i e_i.
  std::vector<Point> vertices;
  /// x_i = 1 / (b, e_i).
  Point intercepts;

  double diameter() const;
};

/// k-volume of the simplex with k+1 vertices via the Gram determinant of its
/// edge vectors. Returns 0 for affinely dependent input.
double simplex_volume(std::span<const Point> vertices);

Point centroid(std::span<const Point> vertices);

struct CircumcenterResult {
  Point center;
  double condition = 1.0;
  bool ill_conditioned = false;
};

/// Circumcenter within the affine hull of the vertices.
CircumcenterResult circumcenter_checked(std::span<const Point> vertices);
Point circumcenter(std::span<const Point> vertices);

/// Monge point of a simplex with v >= 3 vertices, placed on the Euler line
/// at M = C + v/(v-2) (G - C).
Point monge_point(std::span<const Point> vertices);

/// Orthogonal projection of the origin onto the plane: b / |b|^2.
Point foot_of_origin(const Hyperplane& plane);

/// Throws NotAdmissible when some (b, e_i) <= tol::admissible.
Section section(const Hyperangle& cone, const Hyperplane& plane);

bool in_dual_interior(const Hyperangle& cone, const Point& b);

/// K subset of K*: pairwise generator angles are non-obtuse.
bool k_subset_kstar(const Hyperangle& cone);
/// K* subset of K: every dual generator has non-negative generator
/// coordinates, i.e. (E^T E)^{-1} is entrywise non-negative.
bool kstar_subset_k(const Hyperangle& cone);

/// Face-angle criterion for trihedral cones. Angles in radians, sorted
/// internally. Throws InfeasibleAngles for triples no trihedral cone
/// realizes.
bool trihedral_kstar_subset_k(double alpha, double beta, double gamma);
/// A trihedral cone with the given face angles between (e2,e3), (e1,e3) and
/// (e1,e2) respectively.
Hyperangle trihedral_from_face_angles(double alpha, double beta, double gamma);

/// Maximum deviation from orthogonality between each edge of a simplex and
/// the edges of its opposite face, normalized by the edge lengths. Zero for
/// orthocentric simplices.
double orthocentricity_defect(std::span<const Point> vertices);
bool is_orthocentric(std::span<const Point> vertices, double tolerance = 1e-9);

struct SegmentMinimum {
  double value = 0.0;
  Point intercepts;
};

/// Minimal n-volume of the cone segment between O and a hyperplane through
/// an interior point A; the minimizer makes A the centroid of the cut.
SegmentMinimum min_segment_volume(const Hyperangle& cone, const Point& a);

/// k-volume of the simplex spanned by O and the points x_i g_i for k unit
/// directions g_i with Gram volume factor gram_volume = sqrt(det(G^T G)).
double cone_segment_volume(double gram_volume, const Point& intercepts);

/// log(k!) for the log-domain volume routines.
double log_factorial(int k);

}  // namespace coneslice
