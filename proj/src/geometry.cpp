#include "coneslice/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace coneslice {

namespace {

void require_same_dimension(std::span<const Point> points) {
  if (points.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "empty point list");
  }
  const auto n = points.front().size();
  for (const auto& p : points) {
    if (p.size() != n) {
      std::ostringstream msg;
      msg << "point dimension " << p.size() << " differs from " << n;
      throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
  }
}

Matrix edge_matrix(std::span<const Point> vertices) {
  const auto k = static_cast<Eigen::Index>(vertices.size()) - 1;
  Matrix edges(vertices.front().size(), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    edges.col(i) = vertices[i + 1] - vertices[0];
  }
  return edges;
}

}  // namespace

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// ---------------------------------------------------------------------------
// Hyperangle

Hyperangle::Hyperangle(Matrix generators, double abs_det)
    : generators_(std::move(generators)), abs_det_(abs_det) {}

Hyperangle Hyperangle::from_columns(const Matrix& columns) {
  const auto n = columns.rows();
  if (n < 2) {
    throw Error(ErrorKind::DimensionMismatch, "cone dimension must be at least 2");
  }
  if (columns.cols() != n) {
    std::ostringstream msg;
    msg << "expected " << n << " generators, got " << columns.cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  if (!columns.allFinite()) {
    throw Error(ErrorKind::Degenerate, "generators must be finite");
  }
  Matrix unit = columns;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double len = unit.col(j).norm();
    if (len == 0.0) {
      throw Error(ErrorKind::Degenerate, "zero generator");
    }
    unit.col(j) /= len;
  }
  const double det = std::abs(unit.fullPivLu().determinant());
  if (!(det > tol::rank)) {
    std::ostringstream msg;
    msg << "generators are linearly dependent (|det| = " << det << ")";
    throw Error(ErrorKind::Degenerate, msg.str());
  }
  return Hyperangle(std::move(unit), det);
}

Hyperangle Hyperangle::from_generators(std::span<const Point> generators) {
  require_same_dimension(generators);
  const auto n = generators.front().size();
  if (static_cast<Eigen::Index>(generators.size()) != n) {
    std::ostringstream msg;
    msg << "expected " << n << " generators, got " << generators.size();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  Matrix columns(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    columns.col(j) = generators[j];
  }
  return from_columns(columns);
}

Hyperangle Hyperangle::orthant(int n) {
  if (n < 2) {
    throw Error(ErrorKind::DimensionMismatch, "cone dimension must be at least 2");
  }
  return Hyperangle(Matrix::Identity(n, n), 1.0);
}

Hyperangle Hyperangle::angle2d(double alpha) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi)) {
    throw Error(ErrorKind::DomainError, "planar angle must lie in (0, pi)");
  }
  Matrix columns(2, 2);
  columns << 1.0, std::cos(alpha), 0.0, std::sin(alpha);
  return from_columns(columns);
}

Point Hyperangle::coordinates(const Point& x) const {
  if (x.size() != dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "point dimension differs from cone dimension");
  }
  return generators_.partialPivLu().solve(x);
}

Matrix Hyperangle::dual_generators() const {
  return generators_.transpose().partialPivLu().inverse().eval();
}

Hyperangle Hyperangle::dual() const { return from_columns(dual_generators()); }

Hyperplane Hyperplane::from_intercepts(const Hyperangle& cone, const Point& intercepts) {
  // (b, x_i e_i) = 1 for each i, i.e. E^T b = 1/x.
  const Point rhs = intercepts.cwiseInverse();
  return Hyperplane{cone.generators().transpose().partialPivLu().solve(rhs)};
}

double Section::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      d = std::max(d, (vertices[i] - vertices[j]).norm());
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Simplex measures and special points

double simplex_volume(std::span<const Point> vertices) {
  require_same_dimension(vertices);
  if (vertices.size() < 2) {
    throw Error(ErrorKind::DimensionMismatch, "a simplex needs at least two vertices");
  }
  const int k = static_cast<int>(vertices.size()) - 1;
  if (k > vertices.front().size()) {
    return 0.0;
  }
  const Matrix edges = edge_matrix(vertices);
  Eigen::ColPivHouseholderQR<Matrix> qr(edges);
  if (qr.rank() < k) {
    return 0.0;
  }
  // sqrt(det(E^T E)) = prod |R_ii|.
  const auto diag = qr.matrixR().diagonal().head(k).cwiseAbs();
  if (k > kLogDomainDimension) {
    return std::exp(diag.array().log().sum() - log_factorial(k));
  }
  return diag.prod() / std::exp(log_factorial(k));
}

Point centroid(std::span<const Point> vertices) {
  require_same_dimension(vertices);
  Point sum = Point::Zero(vertices.front().size());
  for (const auto& v : vertices) {
    sum += v;
  }
  return sum / static_cast<double>(vertices.size());
}

CircumcenterResult circumcenter_checked(std::span<const Point> vertices) {
  require_same_dimension(vertices);
  if (vertices.size() < 2) {
    throw Error(ErrorKind::Degenerate, "circumcenter needs at least two vertices");
  }
  const auto k = static_cast<Eigen::Index>(vertices.size()) - 1;
  if (k > vertices.front().size()) {
    throw Error(ErrorKind::Degenerate, "too many vertices for an affinely independent set");
  }
  const Matrix edges = edge_matrix(vertices);
  Eigen::HouseholderQR<Matrix> qr(edges);
  const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Matrix q = qr.householderQ() * Matrix::Identity(edges.rows(), k);

  Eigen::JacobiSVD<Matrix> svd(r);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(k - 1);
  if (!(smin > 1e-14 * std::max(1.0, smax))) {
    throw Error(ErrorKind::Degenerate, "vertices are affinely dependent");
  }

  // In the orthonormal frame Q of the affine hull, edge i has coordinates
  // r_i (column i of R) and the center c satisfies 2 (r_i, c) = |r_i|^2.
  const Point rhs = r.colwise().squaredNorm().transpose();
  const Matrix lower = 2.0 * r.transpose();
  const Point local = lower.triangularView<Eigen::Lower>().solve(rhs);

  CircumcenterResult out;
  out.center = vertices[0] + q * local;
  out.condition = smax / smin;
  out.ill_conditioned = out.condition > tol::circumcenter_condition;
  return out;
}

Point circumcenter(std::span<const Point> vertices) {
  return circumcenter_checked(vertices).center;
}

Point monge_point(std::span<const Point> vertices) {
  const auto v = static_cast<double>(vertices.size());
  if (vertices.size() < 3) {
    throw Error(ErrorKind::DomainError, "the Monge point needs at least three vertices");
  }
  const Point c = circumcenter(vertices);
  const Point g = centroid(vertices);
  return c + (v / (v - 2.0)) * (g - c);
}

Point foot_of_origin(const Hyperplane& plane) {
  return plane.normal / plane.normal.squaredNorm();
}

Section section(const Hyperangle& cone, const Hyperplane& plane) {
  const int n = cone.dimension();
  if (plane.dimension() != n) {
    throw Error(ErrorKind::DimensionMismatch, "plane dimension differs from cone dimension");
  }
  const Point s = cone.generators().transpose() * plane.normal;
  for (int i = 0; i < n; ++i) {
    if (!(s(i) > tol::admissible)) {
      std::ostringstream msg;
      msg << "hyperplane is not admissible: (b, e_" << i + 1 << ") = " << s(i);
      throw Error(ErrorKind::NotAdmissible, msg.str());
    }
  }
  Section out{cone, plane, {}, s.cwiseInverse()};
  out.vertices.reserve(n);
  for (int i = 0; i < n; ++i) {
    out.vertices.emplace_back(cone.generator(i) * out.intercepts(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dual-cone predicates

bool in_dual_interior(const Hyperangle& cone, const Point& b) {
  if (b.size() != cone.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "normal dimension differs from cone dimension");
  }
  return ((cone.generators().transpose() * b).array() > 0.0).all();
}

bool k_subset_kstar(const Hyperangle& cone) {
  const Matrix gram = cone.generators().transpose() * cone.generators();
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      if (i != j && gram(i, j) < -tol::predicate) {
        return false;
      }
    }
  }
  return true;
}

bool kstar_subset_k(const Hyperangle& cone) {
  const Matrix gram = cone.generators().transpose() * cone.generators();
  const Matrix inv = gram.ldlt().solve(Matrix::Identity(gram.rows(), gram.cols()));
  const double slack = tol::predicate * std::max(1.0, inv.cwiseAbs().maxCoeff());
  return (inv.array() >= -slack).all();
}

namespace {

void check_face_angles(double a, double b, double c) {
  const double pi = std::numbers::pi;
  for (double x : {a, b, c}) {
    if (!(x > 0.0 && x < pi)) {
      throw Error(ErrorKind::InfeasibleAngles, "face angles must lie in (0, pi)");
    }
  }
  if (!(a < b + c && b < a + c && c < a + b)) {
    throw Error(ErrorKind::InfeasibleAngles, "each face angle must be less than the sum of the others");
  }
  if (!(a + b + c < 2.0 * pi)) {
    throw Error(ErrorKind::InfeasibleAngles, "face angles must sum to less than 2 pi");
  }
}

}  // namespace

bool trihedral_kstar_subset_k(double alpha, double beta, double gamma) {
  check_face_angles(alpha, beta, gamma);
  std::array<double, 3> angles{alpha, beta, gamma};
  std::sort(angles.begin(), angles.end());
  const auto [a, b, c] = angles;
  return b >= std::numbers::pi / 2.0 - tol::predicate &&
         std::cos(a) <= std::cos(b) * std::cos(c) + tol::predicate;
}

Hyperangle trihedral_from_face_angles(double alpha, double beta, double gamma) {
  check_face_angles(alpha, beta, gamma);
  // e1 on the x-axis, e2 in the xy-plane at angle gamma, e3 fixed by its
  // angles beta to e1 and alpha to e2.
  const double y = (std::cos(alpha) - std::cos(beta) * std::cos(gamma)) / std::sin(gamma);
  const double z2 = std::sin(beta) * std::sin(beta) - y * y;
  if (!(z2 > 0.0)) {
    throw Error(ErrorKind::InfeasibleAngles, "face angles do not span a trihedral cone");
  }
  Matrix columns(3, 3);
  columns << 1.0, std::cos(gamma), std::cos(beta),
             0.0, std::sin(gamma), y,
             0.0, 0.0, std::sqrt(z2);
  return Hyperangle::from_columns(columns);
}

double orthocentricity_defect(std::span<const Point> vertices) {
  require_same_dimension(vertices);
  const std::size_t m = vertices.size();
  double defect = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Point e1 = vertices[j] - vertices[i];
      for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = p + 1; q < m; ++q) {
          if (p == i || p == j || q == i || q == j) {
            continue;
          }
          const Point e2 = vertices[q] - vertices[p];
          defect = std::max(defect, std::abs(e1.dot(e2)) / (e1.norm() * e2.norm()));
        }
      }
    }
  }
  return defect;
}

bool is_orthocentric(std::span<const Point> vertices, double tolerance) {
  return orthocentricity_defect(vertices) <= tolerance;
}

double cone_segment_volume(double gram_volume, const Point& intercepts) {
  const int k = static_cast<int>(intercepts.size());
  if (k > kLogDomainDimension) {
    return std::exp(std::log(gram_volume) + intercepts.array().log().sum() - log_factorial(k));
  }
  return gram_volume * intercepts.prod() / std::exp(log_factorial(k));
}

SegmentMinimum min_segment_volume(const Hyperangle& cone, const Point& a) {
  const Point alpha = cone.coordinates(a);
  if (!(alpha.array() > 0.0).all()) {
    throw Error(ErrorKind::NotInterior, "point is not interior to the cone");
  }
  const int n = cone.dimension();
  SegmentMinimum out;
  out.intercepts = static_cast<double>(n) * alpha;
  out.value = cone_segment_volume(cone.abs_det(), out.intercepts);
  return out;
}

}  // namespace coneslice
