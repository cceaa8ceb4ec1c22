#include "coneslice/general_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace coneslice {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

Matrix orthogonal_complement(const Point& a) {
  const auto n = a.size();
  Eigen::HouseholderQR<Matrix> qr{Matrix(a)};
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - 1);
}

// Volume from the slacks s_i = (b, e_i); the caller guarantees admissibility.
double volume_from_slacks(const Hyperangle& cone, const Point& b, const Point& s) {
  const int n = cone.dimension();
  if (n > kLogDomainDimension) {
    return std::exp(std::log(cone.abs_det()) + std::log(b.norm()) - log_factorial(n - 1) -
                    s.array().log().sum());
  }
  return cone.abs_det() * b.norm() / (std::exp(log_factorial(n - 1)) * s.prod());
}

struct ResidualEval {
  Eigen::VectorXd projected;
  double full_norm = 0.0;
  double diameter = 0.0;
};

std::optional<ResidualEval> evaluate_residual(const Hyperangle& cone, const Chart& chart,
                                              const ChartPoint& t) {
  const int n = cone.dimension();
  const Point b = chart.normal_at(t);
  const Point s = cone.generators().transpose() * b;
  if (!(s.array() > tol::admissible).all()) {
    return std::nullopt;
  }
  const Point x = s.cwiseInverse();
  const Point g = cone.generators() * x / static_cast<double>(n);
  const Point h = b / b.squaredNorm();
  const Point& a = chart.point();
  const Point r = (h - a) - n * (g - a);

  ResidualEval out;
  out.projected = chart.tangent_basis().transpose() * r;
  out.full_norm = r.norm();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      out.diameter = std::max(out.diameter, (cone.generator(i) * x(i) - cone.generator(j) * x(j)).norm());
    }
  }
  return out;
}

struct NewtonOutcome {
  ChartPoint t;
  double residual_norm = kInf;
  double diameter = 0.0;
  int iterations = 0;
};

// Damped Newton on the projected residual with a central-difference
// Jacobian. Returns the last admissible iterate.
std::optional<NewtonOutcome> newton(const Hyperangle& cone, const Chart& chart, ChartPoint t,
                                    int max_iterations) {
  auto current = evaluate_residual(cone, chart, t);
  if (!current) {
    return std::nullopt;
  }
  const int m = chart.dimension();
  const double cbrt_eps = std::cbrt(kEps);
  int it = 0;
  for (; it < max_iterations; ++it) {
    const double merit = current->projected.norm();
    if (current->full_norm <= 1e-15 * current->diameter) {
      break;
    }
    const double scale = chart.normal_at(t).norm();
    const double h = cbrt_eps * scale;
    Matrix jac(m, m);
    bool ok = true;
    for (int j = 0; j < m && ok; ++j) {
      ChartPoint tp = t;
      ChartPoint tm = t;
      tp(j) += h;
      tm(j) -= h;
      const auto rp = evaluate_residual(cone, chart, tp);
      const auto rm = evaluate_residual(cone, chart, tm);
      if (!rp || !rm) {
        ok = false;
        break;
      }
      jac.col(j) = (rp->projected - rm->projected) / (2.0 * h);
    }
    if (!ok) {
      break;
    }
    const ChartPoint step = jac.fullPivLu().solve(-current->projected);
    if (!step.allFinite()) {
      break;
    }

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 40; ++k, lambda *= 0.5) {
      const ChartPoint trial = t + lambda * step;
      auto next = evaluate_residual(cone, chart, trial);
      if (next && next->projected.norm() < (1.0 - 1e-4 * lambda) * merit) {
        t = trial;
        current = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      break;
    }
    if (lambda * step.norm() <= 4.0 * kEps * scale) {
      ++it;
      break;
    }
  }
  return NewtonOutcome{t, current->full_norm, current->diameter, it};
}

std::uint64_t next_u64(std::mt19937_64& rng) { return rng(); }

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(next_u64(rng) >> 11) * 0x1.0p-53;
}

void compositions(int total, int parts, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    current.push_back(k);
    compositions(total - k, parts - 1, current, out);
    current.pop_back();
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

// Starting normals: jittered points of a regular grid on the simplex of
// weights over the dual generators, rescaled to (b, a) = 1.
std::vector<Point> starting_normals(const Hyperangle& cone, const Point& a, int num_starts,
                                    std::uint64_t seed, int& generated) {
  const int n = cone.dimension();
  int level = 1;
  while (binomial(level + n - 1, n - 1) < num_starts) {
    ++level;
  }
  std::vector<std::vector<int>> grid;
  std::vector<int> scratch;
  compositions(level, n, scratch, grid);

  std::mt19937_64 rng(seed);
  for (std::size_t i = grid.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(next_u64(rng) % i);
    std::swap(grid[i - 1], grid[j]);
  }
  grid.resize(static_cast<std::size_t>(num_starts));
  generated = num_starts;

  const Matrix dual = cone.dual_generators();
  std::vector<Point> out;
  out.reserve(grid.size());
  for (const auto& cell : grid) {
    Point w(n);
    for (int j = 0; j < n; ++j) {
      w(j) = cell[j] + 0.25 + 0.5 * next_unit(rng);
    }
    Point b = dual * w;
    const double ba = b.dot(a);
    if (!(ba > 1e-12 * b.norm() * a.norm())) {
      continue;
    }
    out.push_back(b / ba);
  }
  return out;
}

bool lexicographic_less(const Point& x, const Point& y) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != y(i)) {
      return x(i) < y(i);
    }
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Chart

Chart::Chart(Point a, Point base_b)
    : a_(std::move(a)), base_b_(std::move(base_b)), basis_(orthogonal_complement(a_)) {}

Chart Chart::make(const Hyperangle& cone, const Point& a) {
  const Point alpha = cone.coordinates(a);
  const int n = cone.dimension();
  double positive = 0.0;
  double negative = 0.0;
  for (int j = 0; j < n; ++j) {
    (alpha(j) > 0.0 ? positive : negative) += std::abs(alpha(j));
  }
  if (!(positive > 0.0)) {
    throw Error(ErrorKind::DomainError, "point lies in -K: no admissible plane passes through it");
  }
  // (D w, a) = sum w_j alpha_j; keep it positive with full weight on the
  // positive coordinates and a small weight elsewhere.
  const double small = negative > 0.0 ? std::min(1.0, 0.5 * positive / negative) : 1.0;
  Point w(n);
  for (int j = 0; j < n; ++j) {
    w(j) = alpha(j) > 0.0 ? 1.0 : small;
  }
  const Point b = cone.dual_generators() * w;
  return Chart(a, b / b.dot(a));
}

Chart Chart::centred(const Point& a, const Point& base_b) {
  if (a.size() != base_b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "normal dimension differs from point dimension");
  }
  if (!(std::abs(base_b.dot(a) - 1.0) <= 1e-9)) {
    throw Error(ErrorKind::PointNotOnPlane, "chart base plane does not pass through the point");
  }
  return Chart(a, base_b);
}

std::string_view to_string(StationaryKind kind) {
  switch (kind) {
    case StationaryKind::LocalMin: return "local_min";
    case StationaryKind::LocalMax: return "local_max";
    case StationaryKind::Saddle: return "saddle";
    case StationaryKind::Degenerate: return "degenerate";
  }
  return "degenerate";
}

std::string_view to_string(Region2DLabel label) {
  switch (label) {
    case Region2DLabel::InteriorK: return "InteriorK";
    case Region2DLabel::InTminusK: return "InTminusK";
    case Region2DLabel::OnBoundaryT: return "OnBoundaryT";
    case Region2DLabel::Outside: return "Outside";
    case Region2DLabel::AtVertex: return "AtVertex";
  }
  return "Outside";
}

double normal_angle(const Point& b1, const Point& b2) {
  const Point u = b1.normalized();
  const Point v = b2.normalized();
  // Stable for small angles, unlike acos of the dot product.
  return 2.0 * std::asin(std::min(1.0, 0.5 * (u - v).norm()));
}

// ---------------------------------------------------------------------------
// Objective

double objective_volume_or_inf(const Hyperangle& cone, const Point& b) {
  const Point s = cone.generators().transpose() * b;
  if (!(s.array() > tol::admissible).all()) {
    return kInf;
  }
  return volume_from_slacks(cone, b, s);
}

double objective_volume(const Hyperangle& cone, const Hyperplane& plane) {
  if (plane.dimension() != cone.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "plane dimension differs from cone dimension");
  }
  const double v = objective_volume_or_inf(cone, plane.normal);
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::NotAdmissible, "hyperplane is not admissible");
  }
  return v;
}

double objective_volume(const Hyperangle& cone, const Chart& chart, const ChartPoint& t) {
  return objective_volume(cone, Hyperplane{chart.normal_at(t)});
}

std::optional<Eigen::VectorXd> chart_residual(const Hyperangle& cone, const Chart& chart,
                                              const ChartPoint& t) {
  auto r = evaluate_residual(cone, chart, t);
  if (!r) {
    return std::nullopt;
  }
  return r->projected;
}

// ---------------------------------------------------------------------------
// Classification

Classification classify(const Hyperangle& cone, const Point& a, const Hyperplane& plane,
                        double tol) {
  const StationarityReport rep = residual(cone, a, plane, tol);
  if (rep.residual_norm > 10.0 * tol * rep.section_diameter) {
    std::ostringstream msg;
    msg << "plane is not stationary (residual " << rep.residual_norm << ")";
    throw Error(ErrorKind::NotStationary, msg.str());
  }
  const Chart chart = Chart::centred(a, plane.normal / plane.normal.dot(a));
  const int m = chart.dimension();
  const double h = std::sqrt(std::sqrt(kEps)) * plane.normal.norm();
  const auto f = [&](const ChartPoint& t) { return objective_volume_or_inf(cone, chart.normal_at(t)); };

  const ChartPoint zero = ChartPoint::Zero(m);
  const double f0 = f(zero);
  Matrix hess(m, m);
  for (int i = 0; i < m; ++i) {
    ChartPoint ei = ChartPoint::Zero(m);
    ei(i) = h;
    hess(i, i) = (f(ei) - 2.0 * f0 + f(-ei)) / (h * h);
    for (int j = i + 1; j < m; ++j) {
      ChartPoint ej = ChartPoint::Zero(m);
      ej(j) = h;
      hess(i, j) = hess(j, i) = (f(ei + ej) - f(ei - ej) - f(ej - ei) + f(-ei - ej)) / (4.0 * h * h);
    }
  }
  if (!hess.allFinite()) {
    throw Error(ErrorKind::NotAdmissible, "finite-difference stencil left the admissible set");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(hess, Eigen::EigenvaluesOnly);
  const Point& values = eig.eigenvalues();
  const double cutoff = 1e-6 * values.cwiseAbs().maxCoeff();

  Classification out;
  out.eigenvalues.assign(values.data(), values.data() + values.size());
  const bool any_small = (values.array().abs() <= cutoff).any();
  if (any_small) {
    out.kind = StationaryKind::Degenerate;
  } else if ((values.array() > 0.0).all()) {
    out.kind = StationaryKind::LocalMin;
  } else if ((values.array() < 0.0).all()) {
    out.kind = StationaryKind::LocalMax;
  } else {
    out.kind = StationaryKind::Saddle;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimization

namespace {

struct SimplexResult {
  ChartPoint best;
  double value = kInf;
  int iterations = 0;
};

// Nelder-Mead with the standard coefficients; +infinity marks points
// outside the admissible set.
template <typename F>
SimplexResult nelder_mead(F&& f, const ChartPoint& start, double initial_step, int max_iterations) {
  const int m = static_cast<int>(start.size());
  std::vector<ChartPoint> pts(m + 1, start);
  std::vector<double> vals(m + 1);

  double step = initial_step;
  for (int attempt = 0; attempt < 60; ++attempt, step *= 0.5) {
    bool finite = true;
    for (int j = 0; j < m; ++j) {
      pts[j + 1] = start;
      pts[j + 1](j) += step;
    }
    for (int j = 0; j <= m; ++j) {
      vals[j] = f(pts[j]);
      finite = finite && std::isfinite(vals[j]);
    }
    if (finite) {
      break;
    }
  }

  std::vector<int> order(m + 1);
  double previous_best = kInf;
  int stalled = 0;
  int it = 0;
  for (; it < max_iterations; ++it) {
    for (int j = 0; j <= m; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return vals[x] < vals[y]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[m - 1];

    const double improvement = previous_best - vals[best];
    stalled = (std::isfinite(previous_best) && improvement <= 1e-12 * std::abs(vals[best])) ? stalled + 1 : 0;
    previous_best = vals[best];
    const double spread = vals[worst] - vals[best];
    if (stalled >= std::max(2 * m, 2) && spread <= 1e-10 * std::abs(vals[best])) {
      break;
    }

    ChartPoint center = ChartPoint::Zero(m);
    for (int j = 0; j <= m; ++j) {
      if (j != worst) center += pts[j];
    }
    center /= m;

    const ChartPoint reflected = center + (center - pts[worst]);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      const ChartPoint expanded = center + 2.0 * (center - pts[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const ChartPoint contracted =
        outside ? ChartPoint(center + 0.5 * (reflected - center)) : ChartPoint(center + 0.5 * (pts[worst] - center));
    const double fc = f(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (int j = 0; j <= m; ++j) {
      if (j == best) continue;
      pts[j] = pts[best] + 0.5 * (pts[j] - pts[best]);
      vals[j] = f(pts[j]);
    }
  }
  const auto best = std::min_element(vals.begin(), vals.end()) - vals.begin();
  return SimplexResult{pts[best], vals[best], it};
}

}  // namespace

StationaryPoint minimize(const Hyperangle& cone, const Point& a, const MinimizeOptions& options) {
  const Point alpha = cone.coordinates(a);
  if (!(alpha.array() > 0.0).all()) {
    throw Error(ErrorKind::NotInterior, "point is not interior to the cone");
  }
  const Chart chart = Chart::make(cone, a);
  const int m = chart.dimension();
  ChartPoint start = options.start.value_or(ChartPoint::Zero(m));
  if (start.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "start has the wrong number of chart coordinates");
  }

  const auto f = [&](const ChartPoint& t) { return objective_volume_or_inf(cone, chart.normal_at(t)); };
  const SimplexResult simplex =
      nelder_mead(f, start, 0.05 * chart.normal_at(start).norm(), options.max_simplex_iterations);

  StationaryPoint best;
  best.plane = Hyperplane{chart.normal_at(simplex.best)};
  best.volume = simplex.value;
  best.iterations = simplex.iterations;

  const auto polished = newton(cone, chart, simplex.best, options.max_newton_iterations);
  if (!polished || !(polished->residual_norm <= options.tol * polished->diameter)) {
    if (const auto r = evaluate_residual(cone, chart, simplex.best)) {
      best.residual_norm = r->full_norm;
    }
    throw NoConvergenceError("minimizer did not reach the stationarity tolerance", best);
  }

  StationaryPoint out;
  out.plane = Hyperplane{chart.normal_at(polished->t)};
  out.volume = objective_volume(cone, out.plane);
  out.residual_norm = polished->residual_norm;
  out.iterations = simplex.iterations + polished->iterations;
  const Classification cls = classify(cone, a, out.plane, options.tol);
  out.kind = cls.kind;
  out.hessian_eigenvalues = cls.eigenvalues;
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration

int default_num_starts(int n) {
  const double grid = std::pow(5.0, n - 1);
  return static_cast<int>(std::min(2000.0, std::max(grid, 50.0)));
}

EnumerateResult enumerate_stationary_detailed(const Hyperangle& cone, const Point& a,
                                              const EnumerateOptions& options) {
  if (a.size() != cone.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "point dimension differs from cone dimension");
  }
  const int n = cone.dimension();
  const int num_starts = options.num_starts > 0 ? options.num_starts : default_num_starts(n);
  const Chart chart = Chart::make(cone, a);

  EnumerateResult result;
  const std::vector<Point> starts =
      starting_normals(cone, a, num_starts, options.seed, result.starts_generated);
  result.starts_used = static_cast<int>(starts.size());

  std::vector<std::optional<NewtonOutcome>> outcomes(starts.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto o = newton(cone, chart, chart.coordinates_of(starts[i]), options.max_newton_iterations);
      if (o && o->residual_norm <= options.tol * o->diameter) {
        outcomes[i] = std::move(o);
      }
    }
  };
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(starts.size())));
  if (threads == 1) {
    work(0, starts.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (starts.size() + threads - 1) / threads;
    for (int k = 0; k < threads; ++k) {
      const std::size_t begin = std::min(starts.size(), k * chunk);
      const std::size_t end = std::min(starts.size(), begin + chunk);
      pool.emplace_back(work, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  // Merge in start order so the result does not depend on scheduling.
  std::vector<StationaryPoint> unique;
  for (const auto& o : outcomes) {
    if (!o) continue;
    ++result.converged;
    const Point b = chart.normal_at(o->t);
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const StationaryPoint& p) {
      return normal_angle(p.plane.normal, b) < options.dedup_angle;
    });
    if (seen) continue;
    StationaryPoint p;
    p.plane = Hyperplane{b};
    p.volume = objective_volume(cone, p.plane);
    p.residual_norm = o->residual_norm;
    p.iterations = o->iterations;
    try {
      const Classification cls = classify(cone, a, p.plane, options.tol);
      p.kind = cls.kind;
      p.hessian_eigenvalues = cls.eigenvalues;
    } catch (const Error&) {
      p.kind = StationaryKind::Degenerate;
    }
    unique.push_back(std::move(p));
  }
  std::sort(unique.begin(), unique.end(), [](const StationaryPoint& x, const StationaryPoint& y) {
    if (x.volume != y.volume) return x.volume < y.volume;
    return lexicographic_less(x.plane.normal.normalized(), y.plane.normal.normalized());
  });
  result.points = std::move(unique);
  return result;
}

std::vector<StationaryPoint> enumerate_stationary(const Hyperangle& cone, const Point& a,
                                                  const EnumerateOptions& options) {
  return enumerate_stationary_detailed(cone, a, options).points;
}

// ---------------------------------------------------------------------------
// Planar angles

double philon_theta(double alpha) {
  if (alpha >= std::numbers::pi / 2.0) {
    return alpha / 2.0;
  }
  const double s = std::sin(alpha / 2.0);
  const double c = std::cos(alpha / 2.0);
  return std::atan(std::pow((1.0 + s * s) / (1.0 + c * c), 1.5));
}

Region2D philon2d_region(double alpha, const Point& a) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi)) {
    throw Error(ErrorKind::DomainError, "planar angle must lie in (0, pi)");
  }
  if (a.size() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "planar point must have two coordinates");
  }
  if (a.isZero(0.0)) {
    throw Error(ErrorKind::AtVertex, "point coincides with the vertex of the angle");
  }
  Region2D out;
  out.theta = philon_theta(alpha);
  double phi = std::atan2(a(1), a(0)) - alpha / 2.0;
  if (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
  if (phi > std::numbers::pi) phi -= 2.0 * std::numbers::pi;
  out.angle_from_bisector = phi;
  const double off = std::abs(phi);
  out.boundary_t_distance = off - out.theta;

  const double half = alpha / 2.0;
  if (alpha >= std::numbers::pi / 2.0) {
    // Only interior points admit a stationary line.
    if (off < half) {
      out.label = Region2DLabel::InteriorK;
      out.expected_count = 1;
    } else {
      out.label = Region2DLabel::Outside;
      out.expected_count = 0;
    }
    return out;
  }
  if (off <= half) {
    out.label = Region2DLabel::InteriorK;
    out.expected_count = 1;
  } else if (std::abs(out.boundary_t_distance) <= kBoundaryTAngleTol) {
    out.label = Region2DLabel::OnBoundaryT;
    out.expected_count = 1;
  } else if (off < out.theta) {
    out.label = Region2DLabel::InTminusK;
    out.expected_count = 2;
  } else {
    out.label = Region2DLabel::Outside;
    out.expected_count = 0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary points

namespace {
constexpr double kCollapsedSectionRatio = 1e-3;
}  // namespace

BoundaryReport boundary_infimum(const Hyperangle& cone, const Point& a,
                                const EnumerateOptions& options) {
  if (a.size() != cone.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "point dimension differs from cone dimension");
  }
  if (a.isZero(0.0)) {
    throw Error(ErrorKind::VertexPoint, "point coincides with the vertex of the cone");
  }
  const int n = cone.dimension();
  const Point alpha = cone.coordinates(a);
  const double zero_tol = 1e-12 * alpha.cwiseAbs().maxCoeff();

  BoundaryReport rep;
  for (int i = 0; i < n; ++i) {
    if (alpha(i) < -zero_tol) {
      throw Error(ErrorKind::NotBoundary, "point lies outside the cone");
    }
    if (alpha(i) > zero_tol) {
      rep.facet_generators.push_back(i);
    }
  }
  rep.face_dimension = static_cast<int>(rep.facet_generators.size());
  if (rep.face_dimension == n) {
    throw Error(ErrorKind::NotBoundary, "point is interior to the cone");
  }
  if (rep.face_dimension < n - 1) {
    rep.m_a = 0.0;
    return rep;
  }

  // Facet case: the infimum is bounded by the minimal cone segment of the
  // facet cut by a hyperplane of the facet through A, which makes A the
  // centroid of the cut.
  const int k = rep.face_dimension;
  Matrix facet(n, k);
  Point intercepts(k);
  for (int j = 0; j < k; ++j) {
    facet.col(j) = cone.generator(rep.facet_generators[j]);
    intercepts(j) = k * alpha(rep.facet_generators[j]);
  }
  const double gram_volume = std::sqrt((facet.transpose() * facet).determinant());
  rep.facet_minimum = cone_segment_volume(gram_volume, intercepts);
  rep.facet_solution = std::vector<double>(intercepts.data(), intercepts.data() + k);

  // Centroid of the segment O, x_1 g_1, ..., x_k g_k and the degenerate
  // stationarity relation with H = O.
  const Point g = facet * intercepts / static_cast<double>(k + 1);
  rep.facet_centroid = g;
  rep.degenerate_residual = ((-a) - n * (g - a)).norm();

  // Newton runs that slide toward the facet limit end on nearly collapsed
  // sections; they approximate the infimum but are not stationary planes.
  for (auto& p : enumerate_stationary(cone, a, options)) {
    const Section sec = section(cone, p.plane);
    if (sec.intercepts.minCoeff() >= kCollapsedSectionRatio * sec.diameter()) {
      rep.stationary.push_back(std::move(p));
    }
  }
  double best = *rep.facet_minimum;
  for (const auto& p : rep.stationary) {
    if (p.kind == StationaryKind::LocalMin && p.volume <= best * (1.0 + 1e-6)) {
      best = std::min(best, p.volume);
      rep.attained_numerically = true;
    }
  }
  rep.m_a = best;
  return rep;
}

}  // namespace coneslice
