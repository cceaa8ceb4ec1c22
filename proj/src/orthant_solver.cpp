#include "coneslice/orthant_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace coneslice::orthant {

namespace {

void require_interior(const Point& a) {
  if (a.size() < 2) {
    throw Error(ErrorKind::DimensionMismatch, "dimension must be at least 2");
  }
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!(a(i) > 0.0) || !std::isfinite(a(i))) {
      std::ostringstream msg;
      msg << "point is not interior to the orthant: a_" << i + 1 << " = " << a(i);
      throw Error(ErrorKind::NotInterior, msg.str());
    }
  }
}

Point half_scaled(const Point& a) { return 0.5 * (a.size() - 1.0) * a; }

// Unchecked evaluations on b directly.
double f_of_b(const Point& b, double x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    sum += b(i) / (b(i) + std::sqrt(b(i) * b(i) + x));
  }
  return sum - 0.5 * (b.size() - 1.0);
}

double df_of_b(const Point& b, double x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const double s = std::sqrt(b(i) * b(i) + x);
    const double denom = b(i) + s;
    sum -= b(i) / (denom * denom * 2.0 * s);
  }
  return sum;
}

void require_domain(const Point& b, double x) {
  const double lo = -b.cwiseAbs2().minCoeff();
  if (!(x >= lo)) {
    std::ostringstream msg;
    msg << "x = " << x << " is below the domain bound " << lo;
    throw Error(ErrorKind::DomainError, msg.str());
  }
}

}  // namespace

double f_eval(const Point& a, double x) {
  require_interior(a);
  const Point b = half_scaled(a);
  require_domain(b, x);
  return f_of_b(b, x);
}

double f_derivative(const Point& a, double x) {
  require_interior(a);
  const Point b = half_scaled(a);
  require_domain(b, x);
  return df_of_b(b, x);
}

RootInfo solve_lambda_detailed(const Point& a) {
  require_interior(a);
  // Solve in units of max a_i; lambda scales with the square of the unit.
  const double unit = a.maxCoeff();
  const Point b = half_scaled(a / unit);
  const double n1 = b.size() - 1.0;

  // b_i / (b_i + sqrt(b_i^2 + x)) < b_i / sqrt(x) makes f negative here.
  double lo = 0.0;
  double hi = std::pow(2.0 * b.sum() / n1, 2) + 1.0;
  const double width = 1e-3 * hi;

  RootInfo info;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (f_of_b(b, mid) > 0.0 ? lo : hi) = mid;
    ++info.bisection_iterations;
  }

  // Newton polish, safeguarded by the bracket.
  double x = 0.5 * (lo + hi);
  double fx = f_of_b(b, x);
  for (int it = 0; it < 100 && std::abs(fx) >= kRootTol; ++it) {
    (fx > 0.0 ? lo : hi) = x;
    double next = x - fx / df_of_b(b, x);
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (next == x) {
      break;
    }
    x = next;
    fx = f_of_b(b, x);
    ++info.newton_iterations;
  }

  info.lambda = x * unit * unit;
  info.f_at_root = fx;
  return info;
}

double solve_lambda(const Point& a) { return solve_lambda_detailed(a).lambda; }

OrthantSolution stationary_section(const Point& a) {
  OrthantSolution sol;
  sol.root = solve_lambda_detailed(a);
  sol.lambda = sol.root.lambda;
  sol.b_vec = half_scaled(a);
  const int n = static_cast<int>(a.size());
  sol.intercepts.resize(n);
  for (int i = 0; i < n; ++i) {
    const double bi = sol.b_vec(i);
    sol.intercepts(i) = bi + std::sqrt(bi * bi + sol.lambda);
  }
  sol.plane = Hyperplane{sol.intercepts.cwiseInverse()};
  sol.distance = 1.0 / sol.plane.normal.norm();
  // prod c_i / ((n-1)! sqrt(lambda))
  if (n > kLogDomainDimension) {
    sol.volume = std::exp(sol.intercepts.array().log().sum() - log_factorial(n - 1) -
                          0.5 * std::log(sol.lambda));
  } else {
    sol.volume = sol.intercepts.prod() / (std::exp(log_factorial(n - 1)) * std::sqrt(sol.lambda));
  }
  return sol;
}

double philon_length_2d(double a1, double a2) {
  if (!(a1 > 0.0 && a2 > 0.0)) {
    throw Error(ErrorKind::NotInterior, "both coordinates must be positive");
  }
  return std::pow(std::cbrt(a1 * a1) + std::cbrt(a2 * a2), 1.5);
}

double shortest_segment(const Point& a) {
  require_interior(a);
  std::vector<double> v(a.data(), a.data() + a.size());
  std::partial_sort(v.begin(), v.begin() + 2, v.end());
  return philon_length_2d(v[0], v[1]);
}

MinimalLineCount minimal_line_count(const Point& a, double tie_tol) {
  require_interior(a);
  std::vector<double> v(a.data(), a.data() + a.size());
  std::sort(v.begin(), v.end());
  const auto tied = [tie_tol](double x, double y) {
    return std::abs(x - y) <= tie_tol * std::max(std::abs(x), std::abs(y));
  };

  // Tie classes of the sorted coordinates.
  std::vector<int> classes;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0 && tied(v[i - 1], v[i])) {
      ++classes.back();
    } else {
      classes.push_back(1);
    }
  }

  MinimalLineCount out;
  out.smallest_tie = classes[0];
  if (classes[0] >= 2) {
    // a_1 = ... = a_k < a_{k+1}: any two of the k smallest axes.
    out.count = classes[0] * (classes[0] - 1) / 2;
    out.second_tie = 1;
    out.other_ties = std::any_of(classes.begin() + 1, classes.end(), [](int c) { return c > 1; });
  } else {
    // a_1 < a_2 = ... = a_k < a_{k+1}: the first axis with any of the k-1.
    out.count = classes[1];
    out.second_tie = classes[1];
    out.other_ties = std::any_of(classes.begin() + 2, classes.end(), [](int c) { return c > 1; });
  }
  return out;
}

}  // namespace coneslice::orthant
