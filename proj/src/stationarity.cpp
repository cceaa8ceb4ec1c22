#include "coneslice/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coneslice {

namespace {

constexpr double kOnPlaneTol = 1e-9;

void require_on_plane(const Point& x, const Hyperplane& plane) {
  const double lhs = plane.normal.dot(x);
  if (!(std::abs(lhs - 1.0) <= kOnPlaneTol)) {
    std::ostringstream msg;
    msg << "point is not on the hyperplane: (b, x) = " << lhs;
    throw Error(ErrorKind::PointNotOnPlane, msg.str());
  }
}

}  // namespace

Point a_prime(const Point& a, int n) { return 0.5 * (n - 1.0) * a; }

StationarityReport residual(const Hyperangle& cone, const Point& a, const Hyperplane& plane,
                            double tol) {
  const int n = cone.dimension();
  if (a.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "point dimension differs from cone dimension");
  }
  const Section sec = section(cone, plane);
  require_on_plane(a, plane);

  StationarityReport rep;
  rep.foot = foot_of_origin(plane);
  rep.centroid = centroid(sec.vertices);
  rep.residual_vector = (rep.foot - a) - n * (rep.centroid - a);
  rep.residual_norm = rep.residual_vector.norm();
  rep.a_prime = a_prime(a, n);
  rep.section_diameter = sec.diameter();

  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  double dsum = 0.0;
  for (const auto& v : sec.vertices) {
    const double d = (v - rep.a_prime).norm();
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
    dsum += d;
  }
  rep.equal_distance_spread = (dmax - dmin) / (dsum / n);

  if (n >= 3) {
    rep.monge_gap = (rep.foot - monge_point(sec.vertices)).norm();
  }
  rep.is_stationary = rep.residual_norm <= tol * rep.section_diameter;
  return rep;
}

TwoOfThree two_of_three_check(const Hyperangle& cone, const Point& a, const Hyperplane& plane,
                              double tol) {
  if (cone.dimension() < 3) {
    throw Error(ErrorKind::DomainError, "the three-condition check needs n >= 3");
  }
  const StationarityReport rep = residual(cone, a, plane, tol);
  TwoOfThree out;
  out.stationary = rep.is_stationary;
  out.equal_distances = rep.equal_distance_spread <= tol;
  out.foot_is_monge = *rep.monge_gap <= tol * rep.section_diameter;
  return out;
}

std::vector<double> barycentric_coordinates(const Section& section, const Point& x) {
  if (x.size() != section.cone.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "point dimension differs from cone dimension");
  }
  require_on_plane(x, section.plane);
  // A_i = x_i e_i, so the weights are the generator coordinates over the
  // intercepts; they sum to (b, X) = 1.
  const Point w = section.cone.coordinates(x).cwiseQuotient(section.intercepts);
  return {w.data(), w.data() + w.size()};
}

double bar_identity_gap(const Hyperangle& cone, const Point& a, const Hyperplane& plane) {
  const Section sec = section(cone, plane);
  const int n = cone.dimension();
  const auto h = barycentric_coordinates(sec, foot_of_origin(plane));
  const auto ab = barycentric_coordinates(sec, a);
  double gap = 0.0;
  for (int i = 0; i < n; ++i) {
    gap = std::max(gap, std::abs(h[i] + (n - 1.0) * ab[i] - 1.0));
  }
  return gap;
}

Point stationary_point_of_plane(const Hyperangle& cone, const Hyperplane& plane) {
  const Section sec = section(cone, plane);
  const int n = cone.dimension();
  return (n * centroid(sec.vertices) - foot_of_origin(plane)) / (n - 1.0);
}

Point equal_distance_point_of_plane(const Hyperangle& cone, const Hyperplane& plane) {
  const Section sec = section(cone, plane);
  const int n = cone.dimension();
  const Point c = circumcenter(sec.vertices);
  const Point h = foot_of_origin(plane);
  return (2.0 / (n - 1.0)) * (c + 0.5 * (n - 3.0) * h);
}

}  // namespace coneslice
