#pragma once

// Stationarity of a cross-section with respect to a point on the plane.
//
// A plane through A is stationary for the constrained volume problem exactly
// when AH = n AG, where H is the foot of the origin on the plane and G the
// centroid of the section. For n >= 3 the condition is tied to two further
// ones: equal distances from A' = ((n-1)/2) A to the section vertices, and
// H coinciding with the Monge point of the section. Any two imply the third.

#include <optional>
#include <vector>

#include "coneslice/geometry.hpp"

namespace coneslice {

inline constexpr double kDefaultStationarityTol = 1e-8;

struct StationarityReport {
  /// (H - A) - n (G - A); lies in the direction space of the plane.
  Point residual_vector;
  double residual_norm = 0.0;
  Point foot;
  Point centroid;
  Point a_prime;
  /// (max - min) / mean of the distances |A' A_i|.
  double equal_distance_spread = 0.0;
  /// |H - M|; empty for n = 2 where the Monge point is undefined.
  std::optional<double> monge_gap;
  /// Largest pairwise vertex distance of the section, the scale for
  /// residual_norm and monge_gap.
  double section_diameter = 0.0;
  bool is_stationary = false;
};

/// Throws NotAdmissible, or PointNotOnPlane when |(b, a) - 1| > 1e-9.
StationarityReport residual(const Hyperangle& cone, const Point& a, const Hyperplane& plane,
                            double tol = kDefaultStationarityTol);

/// ((n-1)/2) A.
Point a_prime(const Point& a, int n);

struct TwoOfThree {
  bool stationary = false;       // AH = n AG
  bool equal_distances = false;  // A'A_1 = ... = A'A_n
  bool foot_is_monge = false;    // H = M

  int count() const { return int(stationary) + int(equal_distances) + int(foot_is_monge); }
};

/// Requires n >= 3.
TwoOfThree two_of_three_check(const Hyperangle& cone, const Point& a, const Hyperplane& plane,
                              double tol = kDefaultStationarityTol);

/// Coefficients x_i with X = sum x_i A_i and sum x_i = 1.
std::vector<double> barycentric_coordinates(const Section& section, const Point& x);

/// max_i |h_i + (n-1) a_i - 1| for the barycentric coordinates h of the foot
/// H and a of the point A.
double bar_identity_gap(const Hyperangle& cone, const Point& a, const Hyperplane& plane);

/// The unique point of the plane for which the plane is stationary:
/// (n G - H) / (n - 1).
Point stationary_point_of_plane(const Hyperangle& cone, const Hyperplane& plane);

/// The unique point A of the plane whose A' is equidistant from the section
/// vertices (the projection of A' onto the plane is the circumcenter).
Point equal_distance_point_of_plane(const Hyperangle& cone, const Hyperplane& plane);

}  // namespace coneslice
