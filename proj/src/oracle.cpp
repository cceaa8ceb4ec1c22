#include "coneslice/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace coneslice::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double normal_draw(std::mt19937_64& rng) {
  const double u1 = 1.0 - unit_draw(rng);
  const double u2 = unit_draw(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Orthonormal basis of the complement of a by Gram-Schmidt over the
// standard basis, keeping the n-1 best-conditioned vectors.
Matrix complement_basis(const Point& a) {
  const auto n = a.size();
  std::vector<Point> basis{a.normalized()};
  std::vector<std::pair<double, int>> candidates;
  for (Eigen::Index i = 0; i < n; ++i) {
    candidates.emplace_back(std::abs(basis[0](i)), static_cast<int>(i));
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& [weight, i] : candidates) {
    if (static_cast<Eigen::Index>(basis.size()) == n) break;
    Point v = Point::Unit(n, i);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) v -= q.dot(v) * q;
    }
    if (v.norm() > 1e-8) basis.push_back(v.normalized());
  }
  Matrix out(n, n - 1);
  for (Eigen::Index j = 1; j < n; ++j) out.col(j - 1) = basis[j];
  return out;
}

template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double width) {
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > width) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

double gram_section_volume(const Hyperangle& cone, const Point& b) {
  const int n = cone.dimension();
  std::vector<Point> vertices;
  for (int i = 0; i < n; ++i) {
    const double s = cone.generator(i).dot(b);
    // Rays nearly parallel to the plane put a vertex out of floating-point
    // reach; the Gram determinant is garbage there.
    if (!(s > 1e-12 * b.norm())) return kInf;
    vertices.push_back(cone.generator(i) / s);
  }
  Matrix edges(n, n - 1);
  for (int j = 1; j < n; ++j) edges.col(j - 1) = vertices[j] - vertices[0];
  const double det = (edges.transpose() * edges).determinant();
  return std::sqrt(std::max(det, 0.0)) / std::tgamma(static_cast<double>(n));
}

GridResult grid_refine_min(const Hyperangle& cone, const Point& a, const GridSpec& spec) {
  if (spec.resolution < 3 || spec.levels < 1 || !(spec.shrink > 0.0 && spec.shrink < 1.0)) {
    throw Error(ErrorKind::DomainError, "grid spec needs resolution >= 3, levels >= 1, shrink in (0,1)");
  }
  const int n = cone.dimension();
  const Matrix dual = cone.generators().transpose().inverse();
  const Point alpha = dual.transpose() * a;
  if (!(alpha.array() > 0.0).all()) {
    throw Error(ErrorKind::NotInterior, "point is not interior to the cone");
  }
  // Admissible normals through A form the open simplex with vertices
  // d_j / alpha_j; its bounding box in the chart seeds the first level.
  std::vector<Point> corners;
  Point origin = Point::Zero(n);
  for (int j = 0; j < n; ++j) {
    corners.push_back(dual.col(j) / alpha(j));
    origin += corners.back() / n;
  }
  const Matrix basis = complement_basis(a);
  const int m = n - 1;
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(m, kInf);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(m, -kInf);
  for (const auto& c : corners) {
    const Eigen::VectorXd t = basis.transpose() * (c - origin);
    lo = lo.cwiseMin(t);
    hi = hi.cwiseMax(t);
  }
  Eigen::VectorXd center = 0.5 * (lo + hi);
  Eigen::VectorXd half = 0.5 * (hi - lo);

  GridResult best;
  best.volume = kInf;
  best.t = center;
  std::vector<int> index(m);
  for (int level = 0; level < spec.levels; ++level) {
    std::fill(index.begin(), index.end(), 0);
    const Eigen::VectorXd level_center = center;
    while (true) {
      Eigen::VectorXd t(m);
      for (int d = 0; d < m; ++d) {
        t(d) = level_center(d) + half(d) * (-1.0 + 2.0 * index[d] / (spec.resolution - 1.0));
      }
      const double v = gram_section_volume(cone, origin + basis * t);
      ++best.evaluations;
      if (v < best.volume ||
          (v == best.volume && std::lexicographical_compare(t.begin(), t.end(), best.t.begin(),
                                                            best.t.end()))) {
        best.volume = v;
        best.t = t;
      }
      int d = 0;
      while (d < m && ++index[d] == spec.resolution) {
        index[d] = 0;
        ++d;
      }
      if (d == m) break;
    }
    center = best.t;
    half *= spec.shrink;
  }
  best.plane = Hyperplane{origin + basis * best.t};
  return best;
}

double cut_length_2d(const Hyperangle& cone, const Point& a, double phi) {
  const double dx = std::cos(phi);
  const double dy = std::sin(phi);
  double u_neg = kInf;
  double u_pos = kInf;
  for (int i = 0; i < 2; ++i) {
    const double ex = cone.generator(i)(0);
    const double ey = cone.generator(i)(1);
    // a + u d = s e  <=>  u d - s e = -a
    const double det = -dx * ey + dy * ex;
    if (std::abs(det) < 1e-15) continue;
    const double u = (-a(0) * -ey - -a(1) * -ex) / det;
    const double s = (dx * -a(1) - dy * -a(0)) / det;
    if (s < 0.0) continue;
    if (u < 0.0) u_neg = -u;
    else u_pos = u;
  }
  return u_neg + u_pos;
}

SegmentScan segment_scan_2d(const Hyperangle& cone, const Point& a, int num_angles) {
  if (cone.dimension() != 2 || a.size() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "segment scan is planar");
  }
  if (!(cone.coordinates(a).array() > 0.0).all()) {
    throw Error(ErrorKind::NotInterior, "point is not interior to the angle");
  }
  const int count = std::max(num_angles, 8);
  const double step = std::numbers::pi / count;
  SegmentScan out;
  out.length = kInf;
  int best = 0;
  for (int k = 0; k < count; ++k) {
    const double len = cut_length_2d(cone, a, k * step);
    ++out.evaluations;
    if (len < out.length) {
      out.length = len;
      best = k;
    }
  }
  auto f = [&](double phi) {
    ++out.evaluations;
    return cut_length_2d(cone, a, phi);
  };
  const auto [phi, len] = golden_min(f, (best - 1) * step, (best + 1) * step, 1e-13);
  if (len < out.length) {
    out.length = len;
    out.best_angle = phi;
  } else {
    out.best_angle = best * step;
  }
  if (out.best_angle < 0.0) out.best_angle += std::numbers::pi;
  return out;
}

namespace {

struct LineEval {
  double along = 0.0;  // residual component along the line direction
  double residual = 0.0;
  double length = 0.0;
  Point b;
};

std::optional<LineEval> line_residual(const Hyperangle& cone, const Point& a, double phi) {
  const Point d{{std::cos(phi), std::sin(phi)}};
  const Point nrm{{-std::sin(phi), std::cos(phi)}};
  const double denom = nrm.dot(a);
  if (denom == 0.0) return std::nullopt;
  const Point b = nrm / denom;
  const double s1 = cone.generator(0).dot(b);
  const double s2 = cone.generator(1).dot(b);
  if (!(s1 > 0.0 && s2 > 0.0)) return std::nullopt;
  const Point v1 = cone.generator(0) / s1;
  const Point v2 = cone.generator(1) / s2;
  const Point g = 0.5 * (v1 + v2);
  const Point h = b / b.squaredNorm();
  const Point r = (h - a) - 2.0 * (g - a);
  return LineEval{r.dot(d), r.norm(), (v1 - v2).norm(), b};
}

}  // namespace

std::vector<StationaryLine> residual_sign_sweep_2d(const Hyperangle& cone, const Point& a,
                                                   int num_angles) {
  if (cone.dimension() != 2 || a.size() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "residual sweep is planar");
  }
  if (a.isZero(0.0)) {
    throw Error(ErrorKind::AtVertex, "point coincides with the vertex of the angle");
  }
  const int count = std::max(num_angles, 8);
  const double step = std::numbers::pi / count;
  std::vector<std::optional<LineEval>> samples(count + 1);
  for (int k = 0; k <= count; ++k) samples[k] = line_residual(cone, a, k * step);

  std::vector<double> roots;
  auto bisect = [&](double lo, double hi) {
    double flo = line_residual(cone, a, lo)->along;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto fm = line_residual(cone, a, mid);
      if (!fm) break;
      if ((fm->along > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fm->along;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  };

  for (int k = 0; k < count; ++k) {
    const auto& s0 = samples[k];
    const auto& s1 = samples[k + 1];
    if (!s0 || !s1) continue;
    if (s0->along == 0.0) {
      roots.push_back(k * step);
    } else if ((s0->along > 0.0) != (s1->along > 0.0) && s1->along != 0.0) {
      bisect(k * step, (k + 1) * step);
    }
  }

  // A pair of roots closer than the sampling step shows up as a local
  // extremum of the residual that does not change sign at the samples.
  for (int k = 1; k < count; ++k) {
    const auto& sm = samples[k - 1];
    const auto& s0 = samples[k];
    const auto& sp = samples[k + 1];
    if (!sm || !s0 || !sp) continue;
    const double sign = s0->along > 0.0 ? 1.0 : -1.0;
    if (sign * sm->along <= 0.0 || sign * sp->along <= 0.0) continue;
    if (std::abs(s0->along) > std::abs(sm->along) || std::abs(s0->along) > std::abs(sp->along)) continue;
    auto f = [&](double phi) {
      const auto e = line_residual(cone, a, phi);
      return e ? sign * e->along : kInf;
    };
    const auto [phi, value] = golden_min(f, (k - 1) * step, (k + 1) * step, 1e-14);
    if (value < 0.0) {
      bisect((k - 1) * step, phi);
      bisect(phi, (k + 1) * step);
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<StationaryLine> out;
  for (double phi : roots) {
    // phi and phi + pi describe the same line.
    const double wrapped = phi >= std::numbers::pi - 1e-12 ? phi - std::numbers::pi : phi;
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const StationaryLine& l) {
      return std::abs(l.angle - wrapped) < 1e-9;
    });
    if (duplicate) continue;
    const auto e = line_residual(cone, a, phi);
    if (!e) continue;
    out.push_back(StationaryLine{wrapped, Hyperplane{e->b}, e->length, e->residual});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.angle < y.angle; });
  return out;
}

double orthant_chord(const Point& a, const Point& u) {
  double lo = -kInf;
  double hi = kInf;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (u(i) > 0.0) lo = std::max(lo, -a(i) / u(i));
    if (u(i) < 0.0) hi = std::min(hi, -a(i) / u(i));
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) return kInf;
  return (hi - lo) * u.norm();
}

MinimalLines minimal_line_scan(const Point& a, int num_starts, std::uint64_t seed, double rel_tol) {
  if (!(a.array() > 0.0).all()) {
    throw Error(ErrorKind::NotInterior, "point is not interior to the orthant");
  }
  const auto n = a.size();
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, Point>> minima;
  for (int s = 0; s < num_starts; ++s) {
    Point u(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = normal_draw(rng);
    u.normalize();
    double len = orthant_chord(a, u);
    if (!std::isfinite(len)) continue;
    // Compass search on the sphere.
    for (double step = 0.25; step > 1e-13;) {
      bool improved = false;
      for (Eigen::Index i = 0; i < n && !improved; ++i) {
        for (double sign : {1.0, -1.0}) {
          Point v = u;
          v(i) += sign * step;
          v.normalize();
          const double lv = orthant_chord(a, v);
          if (lv < len) {
            u = v;
            len = lv;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    minima.emplace_back(len, u);
  }
  MinimalLines out;
  if (minima.empty()) {
    out.length = kInf;
    return out;
  }
  out.length = std::min_element(minima.begin(), minima.end(),
                                [](const auto& x, const auto& y) { return x.first < y.first; })
                   ->first;
  for (const auto& [len, u] : minima) {
    if (len > out.length * (1.0 + rel_tol)) continue;
    const bool seen = std::any_of(out.directions.begin(), out.directions.end(), [&](const Point& v) {
      return std::min((u - v).norm(), (u + v).norm()) < 1e-4;
    });
    if (!seen) out.directions.push_back(u.dot(Point::Ones(n)) >= 0.0 ? u : Point(-u));
  }
  return out;
}

}  // namespace coneslice::oracle
