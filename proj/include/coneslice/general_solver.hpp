#pragma once

// Minimization, enumeration and classification of stationary cross-sections
// for arbitrary simplicial cones.
//
// Planes through A are parametrized by a chart on the affine constraint set
// {b : (b, a) = 1}: b(t) = base_b + V t with V an orthonormal basis of a's
// orthogonal complement. The cross-section volume is
//   V(b) = |det E| |b| / ((n-1)! prod_i (b, e_i)),
// and the gradient of log V in the chart is V^T ((H - A) - n (G - A)), so the
// projected stationarity residual doubles as the optimality condition.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "coneslice/geometry.hpp"
#include "coneslice/stationarity.hpp"

namespace coneslice {

using ChartPoint = Eigen::VectorXd;

class Chart {
 public:
  /// Picks base_b as a positive combination of dual generators rescaled to
  /// (b, a) = 1. Throws DomainError when A lies in -K.
  static Chart make(const Hyperangle& cone, const Point& a);
  /// Chart centred at a given normal; requires (b, a) = 1 within 1e-9.
  static Chart centred(const Point& a, const Point& base_b);

  const Point& point() const { return a_; }
  const Point& base_b() const { return base_b_; }
  const Matrix& tangent_basis() const { return basis_; }
  int dimension() const { return static_cast<int>(basis_.cols()); }

  Point normal_at(const ChartPoint& t) const { return base_b_ + basis_ * t; }
  ChartPoint coordinates_of(const Point& b) const { return basis_.transpose() * (b - base_b_); }

 private:
  Chart(Point a, Point base_b);

  Point a_;
  Point base_b_;
  Matrix basis_;
};

enum class StationaryKind { LocalMin, LocalMax, Saddle, Degenerate };
std::string_view to_string(StationaryKind kind);

struct StationaryPoint {
  Hyperplane plane;
  double volume = 0.0;
  double residual_norm = 0.0;
  StationaryKind kind = StationaryKind::Degenerate;
  std::vector<double> hessian_eigenvalues;
  int iterations = 0;
};

/// Volume of the cross-section; throws NotAdmissible.
double objective_volume(const Hyperangle& cone, const Hyperplane& plane);
double objective_volume(const Hyperangle& cone, const Chart& chart, const ChartPoint& t);
/// Same value, +infinity for non-admissible planes.
double objective_volume_or_inf(const Hyperangle& cone, const Point& b);

/// Projected residual V^T ((H - A) - n (G - A)); empty when b(t) is not
/// admissible.
std::optional<Eigen::VectorXd> chart_residual(const Hyperangle& cone, const Chart& chart,
                                              const ChartPoint& t);

struct Classification {
  StationaryKind kind = StationaryKind::Degenerate;
  std::vector<double> eigenvalues;
};

/// Second-order classification from a central finite-difference Hessian of
/// the volume in chart coordinates. Throws NotStationary when the residual
/// exceeds 10 tol.
Classification classify(const Hyperangle& cone, const Point& a, const Hyperplane& plane,
                        double tol = kDefaultStationarityTol);

struct MinimizeOptions {
  std::optional<ChartPoint> start;
  double tol = kDefaultStationarityTol;
  int max_simplex_iterations = 20000;
  int max_newton_iterations = 100;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, StationaryPoint best)
      : Error(ErrorKind::NoConvergence, what), best_(std::move(best)) {}
  const StationaryPoint& best() const { return best_; }

 private:
  StationaryPoint best_;
};

/// Local minimizer through A: Nelder-Mead on the volume followed by Newton
/// on the residual. Throws NotInterior or NoConvergenceError.
StationaryPoint minimize(const Hyperangle& cone, const Point& a, const MinimizeOptions& options = {});

struct EnumerateOptions {
  /// 0 selects default_num_starts(n).
  int num_starts = 0;
  std::uint64_t seed = 1;
  double tol = kDefaultStationarityTol;
  int threads = 1;
  /// Angular distance below which two unit normals are the same plane.
  double dedup_angle = 1e-6;
  int max_newton_iterations = 100;
};

int default_num_starts(int n);

struct EnumerateResult {
  std::vector<StationaryPoint> points;
  int starts_generated = 0;
  int starts_used = 0;
  int converged = 0;
};

/// Multi-start Newton on the projected residual; results deduplicated and
/// sorted by volume, then lexicographically by unit normal.
EnumerateResult enumerate_stationary_detailed(const Hyperangle& cone, const Point& a,
                                              const EnumerateOptions& options = {});
std::vector<StationaryPoint> enumerate_stationary(const Hyperangle& cone, const Point& a,
                                                  const EnumerateOptions& options = {});

/// Angular distance between the unit normals of two planes.
double normal_angle(const Point& b1, const Point& b2);

// ---------------------------------------------------------------------------
// Planar angles

enum class Region2DLabel { InteriorK, InTminusK, OnBoundaryT, Outside, AtVertex };
std::string_view to_string(Region2DLabel label);

struct Region2D {
  Region2DLabel label = Region2DLabel::Outside;
  /// Half-aperture of the region T admitting stationary lines.
  double theta = 0.0;
  int expected_count = 0;
  /// Signed polar angle of A measured from the bisector of the cone.
  double angle_from_bisector = 0.0;
  /// |angle_from_bisector| - theta.
  double boundary_t_distance = 0.0;
};

inline constexpr double kBoundaryTAngleTol = 1e-9;

/// Half-aperture of T for an acute planar angle. For alpha >= pi/2 the cone
/// itself is returned (theta = alpha / 2).
double philon_theta(double alpha);

/// Region of A relative to the planar angle with rays at polar angles 0 and
/// alpha. Throws AtVertex for A = O.
Region2D philon2d_region(double alpha, const Point& a);

// ---------------------------------------------------------------------------
// Boundary points

struct BoundaryReport {
  /// Infimum of section volumes over admissible planes through A.
  double m_a = 0.0;
  /// Number of generators whose coordinate of A is positive.
  int face_dimension = 0;
  bool attained_numerically = false;
  /// Minimal segment of the facet cone at A, for face_dimension = n - 1.
  std::optional<double> facet_minimum;
  std::vector<int> facet_generators;
  std::optional<std::vector<double>> facet_solution;
  /// |(O - A) - n (G - A)| for the facet segment centroid G.
  std::optional<double> degenerate_residual;
  std::optional<Point> facet_centroid;
  /// Stationary planes found through A (all kinds).
  std::vector<StationaryPoint> stationary;
};

/// Throws VertexPoint for A = O and NotBoundary for interior or exterior A.
BoundaryReport boundary_infimum(const Hyperangle& cone, const Point& a,
                                const EnumerateOptions& options = {});

}  // namespace coneslice
