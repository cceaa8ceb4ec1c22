#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "coneslice/orthant_solver.hpp"
#include "coneslice/stationarity.hpp"

using namespace coneslice;
using namespace coneslice::orthant;

namespace {

Point vec(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

// Plain bisection on f_A written out from scratch, long double.
long double bisect_lambda(const Point& a) {
  const int n = static_cast<int>(a.size());
  auto f = [&](long double x) {
    long double s = 0;
    for (int i = 0; i < n; ++i) {
      const long double b = 0.5L * (n - 1) * a(i);
      s += b / (b + std::sqrt(b * b + x));
    }
    return s - 0.5L * (n - 1);
  };
  long double lo = 0, hi = 1;
  while (f(hi) > 0) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5L * (lo + hi);
}

}  // namespace

TEST_CASE("f_A values") {
  CHECK(f_eval(vec({1, 1, 1}), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(f_eval(vec({1, 1, 1}), 3.0)) < 1e-15);
  CHECK(std::abs(f_eval(vec({1, 2, 3}), 9.4603)) < 2e-4);
  CHECK(std::abs(f_eval(vec({1, 2, 3}), 9.465797814577779)) < 1e-13);
  CHECK(f_derivative(vec({1, 2, 3}), 1.0) < 0.0);
}

TEST_CASE("f_A errors") {
  try {
    f_eval(vec({1, 0, 2}), 1.0);
    FAIL("expected NotInterior");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInterior);
  }
  try {
    f_eval(vec({1, 1, 1}), -2.0);
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainError);
  }
}

TEST_CASE("lambda for known points") {
  for (int n = 2; n <= 10; ++n) {
    CHECK(solve_lambda(Point::Ones(n)) == doctest::Approx(double(n)).epsilon(1e-13));
  }
  CHECK(solve_lambda(vec({1, 8})) == doctest::Approx(20.0).epsilon(1e-13));
  // High-precision reference root.
  CHECK(solve_lambda(vec({1, 2, 3})) == doctest::Approx(9.465797814577779).epsilon(1e-13));
}

TEST_CASE("lambda against bisection over random points") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> logu(std::log(1e-3), std::log(1e3));
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 9;
    Point a(n);
    for (int i = 0; i < n; ++i) a(i) = std::exp(logu(rng));
    const double ref = static_cast<double>(bisect_lambda(a));
    const auto info = solve_lambda_detailed(a);
    CHECK(info.lambda == doctest::Approx(ref).epsilon(1e-11));
    CHECK(std::abs(info.f_at_root) < 1e-12);
  }
}

TEST_CASE("stationary section") {
  SUBCASE("symmetric octant point") {
    const auto s = stationary_section(vec({1, 1, 1}));
    CHECK((s.intercepts - vec({3, 3, 3})).norm() < 1e-13);
    CHECK(s.volume == doctest::Approx(9.0 * std::sqrt(3.0) / 2.0).epsilon(1e-13));
    CHECK(s.distance == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
  }
  SUBCASE("planar") {
    const auto s = stationary_section(vec({1, 8}));
    CHECK((s.intercepts - vec({5, 10})).norm() < 1e-12);
    CHECK(s.volume == doctest::Approx(5.0 * std::sqrt(5.0)).epsilon(1e-13));
  }
  SUBCASE("A = (1, 2, 3)") {
    const auto s = stationary_section(vec({1, 2, 3}));
    CHECK((s.intercepts - vec({4.235088532726389, 5.669577334595604, 7.297184870886727})).norm() <
          1e-11);
    CHECK(s.volume == doctest::Approx(28.474749916205157).epsilon(1e-12));
    CHECK(s.volume == doctest::Approx(simplex_volume(section(Hyperangle::orthant(3), s.plane).vertices))
                          .epsilon(1e-12));
  }
  SUBCASE("plane passes through A, distance matches lambda, residual vanishes") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + trial % 7;
      Point a(n);
      for (int i = 0; i < n; ++i) a(i) = u(rng);
      const auto s = stationary_section(a);
      CHECK(std::abs(s.plane.normal.dot(a) - 1.0) < 1e-12);
      CHECK(std::abs(s.lambda - 1.0 / s.plane.normal.squaredNorm()) < 1e-9 * s.lambda);
      const auto rep = residual(Hyperangle::orthant(n), a, s.plane);
      CHECK(rep.residual_norm < 1e-10 * rep.section_diameter);
    }
  }
  SUBCASE("scaling A scales the intercepts") {
    const Point a = vec({0.4, 1.7, 2.2, 0.9});
    const auto s1 = stationary_section(a);
    const auto s2 = stationary_section(7.0 * a);
    CHECK((s2.intercepts - 7.0 * s1.intercepts).norm() < 1e-11 * s2.intercepts.norm());
  }
}

TEST_CASE("planar shortest segment") {
  CHECK(philon_length_2d(1, 1) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-15));
  CHECK(philon_length_2d(1, 8) == doctest::Approx(std::pow(5.0, 1.5)).epsilon(1e-15));

  // Brute-force scan over lines through (0.1, 10) by x-intercept p:
  // length = sqrt(p^2 + q^2) with q = 10 p / (p - 0.1).
  auto len = [](double p) {
    const double q = 10.0 * p / (p - 0.1);
    return std::hypot(p, q);
  };
  double lo = 0.1 + 1e-9, hi = 100.0;
  for (int it = 0; it < 300; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (len(m1) < len(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  CHECK(philon_length_2d(0.1, 10) == doctest::Approx(len(0.5 * (lo + hi))).epsilon(1e-10));
  CHECK(philon_length_2d(0.1, 10) == doctest::Approx(10.704256018418464).epsilon(1e-14));
}

TEST_CASE("orthant shortest segment") {
  CHECK(shortest_segment(vec({1, 2, 3})) == doctest::Approx(std::pow(1 + std::pow(2.0, 2.0 / 3), 1.5)));
  CHECK(shortest_segment(vec({1, 2, 3})) == doctest::Approx(4.161938184941463).epsilon(1e-14));
  CHECK(shortest_segment(vec({1, 1, 1})) == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(shortest_segment(vec({3, 1, 2})) == shortest_segment(vec({1, 2, 3})));
}

TEST_CASE("minimal line count") {
  CHECK(minimal_line_count(vec({1, 2, 2, 5})).count == 2);
  CHECK(minimal_line_count(vec({1, 1, 1, 4})).count == 3);
  CHECK(minimal_line_count(vec({1, 2, 3})).count == 1);
  CHECK(minimal_line_count(vec({1, 1, 3})).count == 1);
  CHECK(minimal_line_count(vec({2, 2, 2, 2})).count == 6);
  const auto c = minimal_line_count(vec({1, 2, 5, 5}));
  CHECK(c.count == 1);
  CHECK(c.other_ties);
}

TEST_CASE("f_A is strictly decreasing and changes sign at the root") {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 7;
    Point a(n);
    for (int i = 0; i < n; ++i) a(i) = u(rng);
    const double lambda = solve_lambda(a);
    double x1 = u(rng) * lambda, x2 = u(rng) * lambda;
    if (x1 > x2) std::swap(x1, x2);
    if (x1 < x2) CHECK(f_eval(a, x1) > f_eval(a, x2));
    const double d = 1e-6 * lambda;
    CHECK(f_eval(a, lambda - d) > 0.0);
    CHECK(f_eval(a, lambda + d) < 0.0);
  }
}

TEST_CASE("solved section beats random admissible planes through A") {
  std::mt19937_64 rng(28);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    Point a(n);
    for (int i = 0; i < n; ++i) a(i) = u(rng);
    const auto sol = stationary_section(a);
    const auto cone = Hyperangle::orthant(n);
    int worse = 0;
    for (int k = 0; k < 1000; ++k) {
      Point w(n);
      for (int i = 0; i < n; ++i) w(i) = u(rng);
      const Hyperplane plane{w / w.dot(a)};
      worse += simplex_volume(section(cone, plane).vertices) >= sol.volume;
    }
    CHECK(worse == 1000);
  }
}

TEST_CASE("circumcenter of the solved section is A only in three dimensions") {
  std::mt19937_64 rng(38);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 3;
    Point a(n);
    for (int i = 0; i < n; ++i) a(i) = u(rng);
    const auto sol = stationary_section(a);
    const Section s = section(Hyperangle::orthant(n), sol.plane);
    const double gap = (circumcenter(s.vertices) - a).norm() / s.diameter();
    if (n == 3) {
      CHECK(gap < 1e-9);
    } else {
      CHECK(gap > 1e-6);
    }
  }
}
