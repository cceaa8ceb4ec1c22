#pragma once

// Brute-force reference computations. Nothing here calls into the solvers:
// volumes come from explicit vertex construction and a Gram determinant, and
// the constraint chart is built independently.

#include <cstdint>
#include <vector>

#include "coneslice/geometry.hpp"

namespace coneslice::oracle {

struct GridSpec {
  int resolution = 21;
  int levels = 8;
  double shrink = 0.35;
};

struct GridResult {
  Eigen::VectorXd t;
  Hyperplane plane;
  double volume = 0.0;
  long evaluations = 0;
};

/// Shrink-and-refine grid search for the minimal cross-section through an
/// interior point A. The first level covers the whole admissible set.
GridResult grid_refine_min(const Hyperangle& cone, const Point& a, const GridSpec& spec = {});

/// Cross-section volume by vertex construction and Gram determinant;
/// +infinity when the plane is not admissible.
double gram_section_volume(const Hyperangle& cone, const Point& b);

struct SegmentScan {
  double best_angle = 0.0;
  double length = 0.0;
  long evaluations = 0;
};

/// Length of the segment cut from a planar cone by the line through A with
/// direction angle phi; +infinity when the line does not cut a bounded
/// segment through A.
double cut_length_2d(const Hyperangle& cone, const Point& a, double phi);

/// Shortest cut segment through an interior point A of a planar cone.
SegmentScan segment_scan_2d(const Hyperangle& cone, const Point& a, int num_angles = 3600);

struct StationaryLine {
  double angle = 0.0;
  Hyperplane line;
  double length = 0.0;
  double residual = 0.0;
};

/// All stationary lines through A found from sign changes of the residual
/// along the admissible line family, including near-tangential double roots.
std::vector<StationaryLine> residual_sign_sweep_2d(const Hyperangle& cone, const Point& a,
                                                   int num_angles = 720);

/// Length of the chord of the non-negative orthant along A + s u.
double orthant_chord(const Point& a, const Point& u);

struct MinimalLines {
  double length = 0.0;
  /// Unit directions of the distinct minimizing lines, one sign each.
  std::vector<Point> directions;
};

/// Direction-scan search for all lines through an interior point A of the
/// orthant that cut a segment of minimal length.
MinimalLines minimal_line_scan(const Point& a, int num_starts = 400, std::uint64_t seed = 1,
                               double rel_tol = 1e-7);

}  // namespace coneslice::oracle
