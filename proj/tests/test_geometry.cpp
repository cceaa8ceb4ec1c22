#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "coneslice/geometry.hpp"

using namespace coneslice;

namespace {

Point vec(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

bool near(const Point& a, const Point& b, double eps) { return (a - b).cwiseAbs().maxCoeff() <= eps; }

double deg(double d) { return d * std::numbers::pi / 180.0; }

// Heron's formula, independent of the Gram route.
double triangle_area(const Point& p, const Point& q, const Point& r) {
  const double a = (q - r).norm(), b = (p - r).norm(), c = (p - q).norm();
  const double s = 0.5 * (a + b + c);
  return std::sqrt(std::max(0.0, s * (s - a) * (s - b) * (s - c)));
}

}  // namespace

TEST_CASE("simplex volume of small simplices") {
  std::vector<Point> tri{vec({0, 0}), vec({1, 0}), vec({0, 1})};
  CHECK(simplex_volume(tri) == doctest::Approx(0.5).epsilon(1e-14));

  std::vector<Point> eq{vec({3, 0, 0}), vec({0, 3, 0}), vec({0, 0, 3})};
  CHECK(simplex_volume(eq) == doctest::Approx(9.0 * std::sqrt(3.0) / 2.0).epsilon(1e-14));

  std::vector<Point> line{vec({0, 0}), vec({1, 0}), vec({2, 0})};
  CHECK(simplex_volume(line) == 0.0);

  std::vector<Point> tet{vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})};
  CHECK(simplex_volume(tet) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("simplex volume agrees with Heron on random triangles in 4D") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point> v(3, Point(4));
    for (auto& p : v)
      for (int i = 0; i < 4; ++i) p(i) = g(rng);
    const double heron = triangle_area(v[0], v[1], v[2]);
    CHECK(simplex_volume(v) == doctest::Approx(heron).epsilon(1e-9));
  }
}

TEST_CASE("centroid") {
  std::vector<Point> eq{vec({3, 0, 0}), vec({0, 3, 0}), vec({0, 0, 3})};
  CHECK(near(centroid(eq), vec({1, 1, 1}), 1e-15));
  std::vector<Point> tri{vec({0, 0}), vec({2, 0}), vec({0, 2})};
  CHECK(near(centroid(tri), vec({2.0 / 3, 2.0 / 3}), 1e-15));
  std::vector<Point> one{vec({5})};
  CHECK(near(centroid(one), vec({5}), 0.0));
}

TEST_CASE("circumcenter") {
  std::vector<Point> eq{vec({3, 0, 0}), vec({0, 3, 0}), vec({0, 0, 3})};
  CHECK(near(circumcenter(eq), vec({1, 1, 1}), 1e-13));
  std::vector<Point> tri{vec({0, 0}), vec({2, 0}), vec({0, 2})};
  CHECK(near(circumcenter(tri), vec({1, 1}), 1e-13));
  std::vector<Point> seg{vec({0, 0}), vec({4, 0})};
  CHECK(near(circumcenter(seg), vec({2, 0}), 1e-13));

  SUBCASE("equidistant and in the affine hull for random simplices") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 100; ++trial) {
      const int dim = 5, k = 1 + trial % 4;
      std::vector<Point> v(k + 1, Point(dim));
      for (auto& p : v)
        for (int i = 0; i < dim; ++i) p(i) = g(rng);
      const auto res = circumcenter_checked(v);
      const double r0 = (res.center - v[0]).norm();
      for (const auto& p : v) CHECK((res.center - p).norm() == doctest::Approx(r0).epsilon(1e-9));
      Matrix edges(dim, k);
      for (int j = 0; j < k; ++j) edges.col(j) = v[j + 1] - v[0];
      const Point rel = res.center - v[0];
      const Point proj = edges * edges.colPivHouseholderQr().solve(rel);
      CHECK((rel - proj).norm() < 1e-9 * (1.0 + r0));
    }
  }

  SUBCASE("nearly degenerate input is flagged") {
    std::vector<Point> flat{vec({0, 0}), vec({1, 0}), vec({2, 1e-12})};
    CHECK(circumcenter_checked(flat).ill_conditioned);
  }
}

TEST_CASE("monge point") {
  std::vector<Point> right{vec({0, 0}), vec({2, 0}), vec({0, 2})};
  CHECK(near(monge_point(right), vec({0, 0}), 1e-12));
  std::vector<Point> eq{vec({3, 0, 0}), vec({0, 3, 0}), vec({0, 0, 3})};
  CHECK(near(monge_point(eq), vec({1, 1, 1}), 1e-12));
  std::vector<Point> seg{vec({0, 0}), vec({1, 0})};
  CHECK_THROWS_AS(monge_point(seg), Error);

  SUBCASE("tetrahedron: planes through edge midpoints orthogonal to opposite edges") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Point> v(4, Point(3));
      for (auto& p : v)
        for (int i = 0; i < 3; ++i) p(i) = g(rng);
      const Point m = monge_point(v);
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          int k = 0;
          while (k == i || k == j) ++k;
          int l = k + 1;
          while (l == i || l == j) ++l;
          const Point mid = 0.5 * (v[i] + v[j]);
          const Point opposite = v[l] - v[k];
          CHECK(std::abs((m - mid).dot(opposite)) < 1e-10 * (1.0 + m.norm()) * opposite.norm());
        }
      }
    }
  }
}

TEST_CASE("foot of origin") {
  CHECK(near(foot_of_origin({vec({1.0 / 3, 1.0 / 3, 1.0 / 3})}), vec({1, 1, 1}), 1e-15));
  CHECK(near(foot_of_origin({vec({1, 0})}), vec({1, 0}), 0.0));
  CHECK(near(foot_of_origin({vec({0.5, 0.25})}), vec({1.6, 0.8}), 1e-15));
}

TEST_CASE("section vertices and admissibility") {
  const auto orth = Hyperangle::orthant(3);
  const Section s = section(orth, {vec({1.0 / 3, 1.0 / 3, 1.0 / 3})});
  CHECK(near(s.vertices[0], vec({3, 0, 0}), 1e-14));
  CHECK(near(s.vertices[1], vec({0, 3, 0}), 1e-14));
  CHECK(near(s.vertices[2], vec({0, 0, 3}), 1e-14));
  CHECK(s.diameter() == doctest::Approx(3.0 * std::sqrt(2.0)));

  try {
    section(orth, {vec({1, 0, 0})});
    FAIL("expected NotAdmissible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAdmissible);
  }

  Matrix cols(2, 2);
  cols << 1, 1, 0, 1;
  const auto cone = Hyperangle::from_columns(cols);
  const Section t = section(cone, {vec({1, 0})});
  CHECK(near(t.vertices[0], vec({1, 0}), 1e-14));
  CHECK(near(t.vertices[1], vec({1, 1}), 1e-14));
}

TEST_CASE("hyperangle validation") {
  Matrix singular(2, 2);
  singular << 1, 2, 0, 0;
  try {
    Hyperangle::from_columns(singular);
    FAIL("expected Degenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
  std::vector<Point> gens{vec({1, 0, 0}), vec({0, 1, 0})};
  try {
    Hyperangle::from_generators(gens);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("dual interior membership") {
  const auto orth = Hyperangle::orthant(3);
  CHECK(in_dual_interior(orth, vec({1, 1, 1})));
  CHECK_FALSE(in_dual_interior(orth, vec({1, -0.1, 1})));
  CHECK_FALSE(in_dual_interior(orth, vec({1, 0, 1})));
}

TEST_CASE("cone inclusion predicates") {
  CHECK(k_subset_kstar(Hyperangle::orthant(3)));
  CHECK(kstar_subset_k(Hyperangle::orthant(3)));
  Matrix obtuse(2, 2);
  obtuse << 1, -0.1, 0, 1;
  CHECK_FALSE(k_subset_kstar(Hyperangle::from_columns(obtuse)));
  CHECK(kstar_subset_k(Hyperangle::angle2d(deg(120))));
  CHECK_FALSE(kstar_subset_k(Hyperangle::angle2d(deg(60))));
  CHECK(k_subset_kstar(Hyperangle::angle2d(deg(60))));

  SUBCASE("K* subset K is K subset K* for the dual cone") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
      Matrix cols = Matrix::Identity(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i != j) cols(i, j) = 0.3 * g(rng);
      Hyperangle cone = Hyperangle::orthant(3);
      try {
        cone = Hyperangle::from_columns(cols);
      } catch (const Error&) {
        continue;
      }
      CHECK(kstar_subset_k(cone) == k_subset_kstar(cone.dual()));
      ++checked;
    }
    CHECK(checked > 250);
  }
}

TEST_CASE("trihedral criterion") {
  const double right = std::numbers::pi / 2;
  CHECK(trihedral_kstar_subset_k(right, right, right));
  CHECK_FALSE(trihedral_kstar_subset_k(deg(60), deg(60), deg(60)));
  CHECK(trihedral_kstar_subset_k(deg(100), deg(100), deg(100)));
  try {
    trihedral_kstar_subset_k(deg(10), deg(20), deg(100));
    FAIL("expected InfeasibleAngles");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InfeasibleAngles);
  }

  SUBCASE("agrees with the matrix predicate on realized cones") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(deg(20), deg(160));
    int realized = 0;
    for (int trial = 0; trial < 2000 && realized < 300; ++trial) {
      const double a = u(rng), b = u(rng), c = u(rng);
      Hyperangle cone = Hyperangle::orthant(3);
      try {
        cone = trihedral_from_face_angles(a, b, c);
      } catch (const Error&) {
        continue;
      }
      // Skip triples too close to the decision boundary.
      const Matrix inv = (cone.generators().transpose() * cone.generators()).inverse();
      if (inv.cwiseAbs().minCoeff() < 1e-6) continue;
      ++realized;
      CHECK(trihedral_kstar_subset_k(a, b, c) == kstar_subset_k(cone));
    }
    CHECK(realized >= 100);
  }
}

TEST_CASE("orthocentricity") {
  std::vector<Point> corner{vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 2, 0}), vec({0, 0, 3})};
  CHECK(is_orthocentric(corner));
  std::vector<Point> skew{vec({0, 0, 0}), vec({1, 0, 0}), vec({0.3, 2, 0}), vec({0, 0.4, 3})};
  CHECK_FALSE(is_orthocentric(skew));
  CHECK(orthocentricity_defect(skew) > 1e-3);
}

TEST_CASE("minimal cone segment") {
  SUBCASE("quadrant") {
    const auto q = Hyperangle::orthant(2);
    auto r = min_segment_volume(q, vec({1, 1}));
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(near(r.intercepts, vec({2, 2}), 1e-14));
    r = min_segment_volume(q, vec({1, 2}));
    CHECK(r.value == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(near(r.intercepts, vec({2, 4}), 1e-14));
  }
  SUBCASE("octant") {
    const auto r = min_segment_volume(Hyperangle::orthant(3), vec({1, 1, 1}));
    CHECK(r.value == doctest::Approx(4.5).epsilon(1e-14));
  }
  SUBCASE("quadrant against a one-parameter scan") {
    // Lines through (1, 2): intercept p on the x axis fixes q = 2p / (p - 1).
    double best = 1e300;
    for (int i = 1; i < 200000; ++i) {
      const double p = 1.0 + i * 1e-5;
      best = std::min(best, 0.5 * p * 2.0 * p / (p - 1.0));
    }
    CHECK(min_segment_volume(Hyperangle::orthant(2), vec({1, 2})).value ==
          doctest::Approx(best).epsilon(1e-8));
  }
  SUBCASE("exterior point") {
    CHECK_THROWS_AS(min_segment_volume(Hyperangle::orthant(2), vec({1, -1})), Error);
  }
}

TEST_CASE("log-domain volume in high dimension") {
  const int n = 24;
  std::vector<Point> v;
  for (int i = 0; i < n; ++i) v.push_back(Point::Unit(n, i) * 2.0);
  // Regular simplex with edge 2 sqrt 2: sqrt(n) / (n-1)! * (2^(n-1)) for
  // vertices 2 e_i.
  const double expected = std::exp(std::log(std::sqrt(double(n))) + (n - 1) * std::log(2.0) -
                                   std::lgamma(double(n)));
  CHECK(simplex_volume(v) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("simplex volume is permutation invariant and homogeneous") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + trial % 5, k = 1 + trial % dim;
    std::vector<Point> v(k + 1, Point(dim));
    for (auto& p : v)
      for (int i = 0; i < dim; ++i) p(i) = g(rng);
    const double base = simplex_volume(v);
    std::vector<Point> shuffled = v;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(simplex_volume(shuffled) == doctest::Approx(base).epsilon(1e-10));
    const double s = scale(rng);
    std::vector<Point> scaled;
    for (const auto& p : v) scaled.push_back(s * p);
    CHECK(simplex_volume(scaled) == doctest::Approx(std::pow(s, k) * base).epsilon(1e-10));
  }
}

TEST_CASE("monge point: defining orthogonality in dimensions 2 to 5") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  for (int dim = 2; dim <= 5; ++dim) {
    const int v = dim + 1;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Point> verts(v, Point(dim));
      for (auto& p : verts)
        for (int i = 0; i < dim; ++i) p(i) = g(rng);
      const Point m = monge_point(verts);
      const Point c = circumcenter(verts);
      const Point gc = centroid(verts);
      // Centroid on the Euler line: CG = ((v-2)/v) CM.
      CHECK(((gc - c) - (double(v - 2) / v) * (m - c)).norm() < 1e-10 * (1.0 + (m - c).norm()));
      double scale = 0;
      for (const auto& p : verts) scale = std::max(scale, (p - gc).norm());
      for (int i = 0; i < v; ++i) {
        for (int j = i + 1; j < v; ++j) {
          // Face of the remaining v-2 vertices.
          Point face = Point::Zero(dim);
          for (int l = 0; l < v; ++l)
            if (l != i && l != j) face += verts[l];
          face /= double(v - 2);
          const Point edge = verts[i] - verts[j];
          CHECK(std::abs((m - face).dot(edge)) < 1e-8 * edge.norm() * std::max(scale, (m - face).norm()));
        }
      }
    }
  }
}

TEST_CASE("foot of origin lies on the plane, orthogonal to it") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    Point b(n);
    for (int i = 0; i < n; ++i) b(i) = u(rng);
    const Hyperplane plane{b};
    const Point h = foot_of_origin(plane);
    CHECK(std::abs(b.dot(h) - 1.0) < 1e-12);
    const Section s = section(Hyperangle::orthant(n), plane);
    for (const auto& p : s.vertices) {
      CHECK(std::abs(b.dot(p) - 1.0) < 1e-12);
      CHECK(std::abs(h.dot(p - s.vertices[0])) < 1e-12 * h.norm() * s.diameter());
    }
  }
}

TEST_CASE("trihedral criterion on 1000 realized triples") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(deg(5), deg(175));
  int realized = 0, agree = 0;
  while (realized < 1000) {
    const double a = u(rng), b = u(rng), c = u(rng);
    Hyperangle cone = Hyperangle::orthant(3);
    try {
      cone = trihedral_from_face_angles(a, b, c);
    } catch (const Error&) {
      continue;
    }
    ++realized;
    agree += trihedral_kstar_subset_k(a, b, c) == kstar_subset_k(cone);
  }
  CHECK(agree == realized);
}

TEST_CASE("minimal cone segment is a local minimum") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.2, 4.0);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    const auto cone = Hyperangle::orthant(n);
    Point a(n);
    for (int i = 0; i < n; ++i) a(i) = u(rng);
    const auto best = min_segment_volume(cone, a);
    const Point b0 = best.intercepts.cwiseInverse();
    for (int k = 0; k < 20; ++k) {
      // Perturb within {b : (b, a) = 1} by about 1 percent.
      Point d(n);
      for (int i = 0; i < n; ++i) d(i) = g(rng);
      d -= (d.dot(a) / a.squaredNorm()) * a;
      d *= 0.01 * b0.norm() / d.norm();
      const Point b = b0 + d;
      if ((b.array() <= 0).any()) continue;
      const double v = cone_segment_volume(1.0, b.cwiseInverse());
      CHECK(v >= best.value * (1.0 - 1e-14));
    }
  }
}
