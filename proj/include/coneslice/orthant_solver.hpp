#pragma once

// Stationary cross-sections of the non-negative orthant.
//
// For an interior point A put b_i = ((n-1)/2) a_i and
//   f_A(x) = sum_i b_i / (b_i + sqrt(b_i^2 + x)) - (n-1)/2.
// f_A decreases strictly from f_A(0) = 1/2 to (1-n)/2, so it has one root
// lambda_A > 0. The unique stationary plane meets the axes at
// c_i = b_i + sqrt(b_i^2 + lambda_A) and lies at distance sqrt(lambda_A)
// from the origin.

#include "coneslice/geometry.hpp"

namespace coneslice::orthant {

inline constexpr double kRootTol = 1e-13;
inline constexpr double kTieTol = 1e-9;

/// Throws NotInterior for non-positive coordinates and DomainError when
/// x < -min b_i^2.
double f_eval(const Point& a, double x);
double f_derivative(const Point& a, double x);

struct RootInfo {
  double lambda = 0.0;
  double f_at_root = 0.0;
  int bisection_iterations = 0;
  int newton_iterations = 0;
};

RootInfo solve_lambda_detailed(const Point& a);
double solve_lambda(const Point& a);

struct OrthantSolution {
  double lambda = 0.0;
  Point b_vec;
  Point intercepts;
  Hyperplane plane;
  double volume = 0.0;
  double distance = 0.0;
  RootInfo root;
};

OrthantSolution stationary_section(const Point& a);

/// Shortest segment cut from the first quadrant by a line through (a1, a2).
double philon_length_2d(double a1, double a2);

/// Shortest segment cut from the orthant by a line through A; only the two
/// smallest coordinates matter.
double shortest_segment(const Point& a);

struct MinimalLineCount {
  int count = 1;
  /// Size of the tie class of the smallest coordinate.
  int smallest_tie = 1;
  /// Size of the tie class of the second smallest value (1 when the two
  /// smallest coordinates are tied).
  int second_tie = 1;
  /// Ties among larger coordinates; they do not change the count.
  bool other_ties = false;
};

/// Number of distinct lines through A cutting a segment of minimal length.
MinimalLineCount minimal_line_count(const Point& a, double tie_tol = kTieTol);

}  // namespace coneslice::orthant
