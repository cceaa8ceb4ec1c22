#include "coneslice/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "coneslice/general_solver.hpp"
#include "coneslice/json_writer.hpp"
#include "coneslice/oracle.hpp"
#include "coneslice/orthant_solver.hpp"
#include "coneslice/stationarity.hpp"

namespace coneslice::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitMalformed = 1;
constexpr int kExitDomain = 2;
constexpr int kMaxDimension = 64;

// Malformed input: bad flags, unreadable files, schema violations.
struct InputError {
  std::string field;
  std::string message;
};

struct Options {
  std::string cone_path;
  std::string preset;
  int dimension = 0;
  double alpha_degrees = 0.0;
  std::string point;
  double tol = kDefaultStationarityTol;
  int starts = 0;
  std::uint64_t seed = 1;
  std::string output = "-";
  std::string plot_data;
  int threads = 1;
  int resolution = 21;
  int levels = 8;
  double shrink = 0.35;
  int num_angles = 2048;
};

struct ConeInput {
  Hyperangle cone;
  Json echo;
};

// ---------------------------------------------------------------------------
// Input parsing

Json vector_json(const Point& p) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(p(i));
  return out;
}

Json vector_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Point parse_point(const std::string& csv) {
  if (csv.empty()) {
    throw InputError{"--point", "a point is required (comma-separated coordinates)"};
  }
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0' || !std::isfinite(x)) {
      throw InputError{"--point[" + std::to_string(values.size()) + "]",
                       "not a finite number: '" + item + "'"};
    }
    values.push_back(x);
  }
  if (values.size() < 2 || values.size() > kMaxDimension) {
    throw InputError{"--point", "dimension must lie in [2, 64]"};
  }
  return Eigen::Map<const Point>(values.data(), static_cast<Eigen::Index>(values.size()));
}

double require_number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw InputError{field, "expected a number"};
  return j.get<double>();
}

int require_dimension(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw InputError{field, "expected an integer"};
  const int n = j.get<int>();
  if (n < 2 || n > kMaxDimension) throw InputError{field, "dimension must lie in [2, 64]"};
  return n;
}

Hyperangle validated(const std::function<Hyperangle()>& build, const std::string& field) {
  try {
    return build();
  } catch (const Error& e) {
    throw InputError{field, e.what()};
  }
}

ConeInput cone_from_preset(const std::string& preset, int dimension, double alpha_degrees,
                           const std::string& field) {
  if (preset == "orthant") {
    if (dimension < 2 || dimension > kMaxDimension) {
      throw InputError{field + ".dimension", "dimension must lie in [2, 64]"};
    }
    return {Hyperangle::orthant(dimension), Json{{"preset", "orthant"}, {"dimension", dimension}}};
  }
  if (preset == "angle2d") {
    if (!(alpha_degrees > 0.0 && alpha_degrees < 180.0)) {
      throw InputError{field + ".alpha_degrees", "angle must lie in (0, 180) degrees"};
    }
    const double alpha = alpha_degrees * std::numbers::pi / 180.0;
    return {validated([&] { return Hyperangle::angle2d(alpha); }, field),
            Json{{"preset", "angle2d"}, {"alpha_degrees", alpha_degrees}}};
  }
  throw InputError{field, "unknown preset '" + preset + "' (expected orthant or angle2d)"};
}

ConeInput cone_from_json(const Json& j) {
  if (!j.is_object()) throw InputError{"cone", "expected a JSON object"};
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) throw InputError{"cone.preset", "expected a string"};
    const std::string preset = j["preset"].get<std::string>();
    int dimension = 0;
    double alpha = 0.0;
    if (preset == "orthant") {
      if (!j.contains("dimension")) throw InputError{"cone.dimension", "missing"};
      dimension = require_dimension(j["dimension"], "cone.dimension");
    } else if (preset == "angle2d") {
      if (!j.contains("alpha_degrees")) throw InputError{"cone.alpha_degrees", "missing"};
      alpha = require_number(j["alpha_degrees"], "cone.alpha_degrees");
    }
    return cone_from_preset(preset, dimension, alpha, "cone");
  }
  if (!j.contains("dimension")) throw InputError{"cone.dimension", "missing"};
  if (!j.contains("generators")) throw InputError{"cone.generators", "missing"};
  const int n = require_dimension(j["dimension"], "cone.dimension");
  const Json& gens = j["generators"];
  if (!gens.is_array()) throw InputError{"cone.generators", "expected an array"};
  if (static_cast<int>(gens.size()) != n) {
    throw InputError{"cone.generators", "expected " + std::to_string(n) + " generators, got " +
                                            std::to_string(gens.size())};
  }
  Matrix columns(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string field = "cone.generators[" + std::to_string(i) + "]";
    if (!gens[i].is_array() || static_cast<int>(gens[i].size()) != n) {
      throw InputError{field, "expected an array of " + std::to_string(n) + " numbers"};
    }
    for (int k = 0; k < n; ++k) {
      columns(k, i) = require_number(gens[i][k], field + "[" + std::to_string(k) + "]");
    }
  }
  Json echo{{"dimension", n}, {"generators", gens}};
  return {validated([&] { return Hyperangle::from_columns(columns); }, "cone.generators"), echo};
}

ConeInput load_cone(const Options& opt, int point_dimension) {
  if (!opt.cone_path.empty()) {
    std::ifstream in(opt.cone_path);
    if (!in) throw InputError{"--cone", "cannot open '" + opt.cone_path + "'"};
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError{"--cone", std::string("invalid JSON: ") + e.what()};
    }
    return cone_from_json(j);
  }
  const std::string preset = opt.preset.empty() ? "orthant" : opt.preset;
  const int dimension = opt.dimension > 0 ? opt.dimension : point_dimension;
  return cone_from_preset(preset, dimension, opt.alpha_degrees, "--preset");
}

void require_matching(const Hyperangle& cone, const Point& a) {
  if (cone.dimension() != a.size()) {
    throw InputError{"--point", "point has dimension " + std::to_string(a.size()) +
                                    " but the cone has dimension " + std::to_string(cone.dimension())};
  }
}

// ---------------------------------------------------------------------------
// Result payloads

Json stationarity_json(const StationarityReport& rep) {
  Json j;
  j["residual_norm"] = rep.residual_norm;
  j["foot"] = vector_json(rep.foot);
  j["centroid"] = vector_json(rep.centroid);
  j["a_prime"] = vector_json(rep.a_prime);
  j["equal_distance_spread"] = rep.equal_distance_spread;
  if (rep.monge_gap) {
    j["monge_gap"] = *rep.monge_gap;
  } else {
    j["monge_gap"] = "undefined";
  }
  j["section_diameter"] = rep.section_diameter;
  j["is_stationary"] = rep.is_stationary;
  return j;
}

Json stationary_point_json(const Hyperangle& cone, const Point& a, const StationaryPoint& p,
                           double tol) {
  const StationarityReport rep = residual(cone, a, p.plane, tol);
  const Section sec = section(cone, p.plane);
  Json j;
  j["plane_normal"] = vector_json(p.plane.normal);
  j["volume"] = p.volume;
  j["residual_norm"] = rep.residual_norm;
  j["kind"] = std::string(to_string(p.kind));
  j["hessian_eigenvalues"] = vector_json(p.hessian_eigenvalues);
  j["intercepts"] = vector_json(sec.intercepts);
  j["stationarity"] = stationarity_json(rep);
  return j;
}

// ---------------------------------------------------------------------------
// Plot data

class PlotWriter {
 public:
  explicit PlotWriter(int dimension) : dimension_(dimension) {}

  void polyline(const std::string& series, const std::vector<Point>& points) {
    for (const auto& p : points) {
      rows_ << series;
      for (int i = 0; i < std::min(dimension_, 3); ++i) rows_ << ',' << format(p(i));
      rows_ << '\n';
    }
  }

  void rays(const Hyperangle& cone, double length) {
    for (int i = 0; i < cone.dimension(); ++i) {
      polyline("ray_" + std::to_string(i + 1),
               {Point::Zero(cone.dimension()), Point(cone.generator(i) * length)});
    }
  }

  void section_loop(const std::string& series, const Section& sec) {
    std::vector<Point> loop = sec.vertices;
    loop.push_back(sec.vertices.front());
    polyline(series, loop);
  }

  bool supported() const { return dimension_ <= 3; }

  std::string str() const {
    std::string header = dimension_ >= 3 ? "series,x,y,z\n" : "series,x,y\n";
    return header + rows_.str();
  }

 private:
  static std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }

  int dimension_;
  std::ostringstream rows_;
};

// ---------------------------------------------------------------------------
// Commands

struct CommandOutput {
  Json inputs;
  Json result;
  Json diagnostics = Json::object();
};

using Plot = std::optional<PlotWriter>;

CommandOutput cmd_orthant_solve(const Options& opt, Plot& plot) {
  const Point a = parse_point(opt.point);
  const auto sol = orthant::stationary_section(a);
  const Hyperangle cone = Hyperangle::orthant(static_cast<int>(a.size()));
  const StationarityReport rep = residual(cone, a, sol.plane, opt.tol);

  CommandOutput out;
  out.inputs = Json{{"point", vector_json(a)}, {"cone", {{"preset", "orthant"}, {"dimension", a.size()}}},
                    {"tol", opt.tol}};
  out.result["lambda"] = sol.lambda;
  out.result["b_vec"] = vector_json(sol.b_vec);
  out.result["intercepts"] = vector_json(sol.intercepts);
  out.result["plane_normal"] = vector_json(sol.plane.normal);
  out.result["volume"] = sol.volume;
  out.result["distance"] = sol.distance;
  out.result["residual_norm"] = rep.residual_norm;
  out.result["stationarity"] = stationarity_json(rep);
  out.diagnostics["f_at_root"] = sol.root.f_at_root;
  out.diagnostics["bisection_iterations"] = sol.root.bisection_iterations;
  out.diagnostics["newton_iterations"] = sol.root.newton_iterations;
  if (plot) {
    plot->rays(cone, sol.intercepts.maxCoeff());
    plot->section_loop("section_1", section(cone, sol.plane));
    plot->polyline("point", {a});
  }
  return out;
}

CommandOutput cmd_solve(const Options& opt, Plot& plot) {
  const Point a = parse_point(opt.point);
  const ConeInput in = load_cone(opt, static_cast<int>(a.size()));
  require_matching(in.cone, a);
  MinimizeOptions mopt;
  mopt.tol = opt.tol;
  const StationaryPoint p = minimize(in.cone, a, mopt);

  CommandOutput out;
  out.inputs = Json{{"point", vector_json(a)}, {"cone", in.echo}, {"tol", opt.tol}};
  out.result = stationary_point_json(in.cone, a, p, opt.tol);
  out.diagnostics["iterations"] = p.iterations;
  if (plot) {
    const Section sec = section(in.cone, p.plane);
    plot->rays(in.cone, sec.intercepts.maxCoeff());
    plot->section_loop("section_1", sec);
    plot->polyline("point", {a});
  }
  return out;
}

CommandOutput cmd_enumerate(const Options& opt, Plot& plot) {
  const Point a = parse_point(opt.point);
  const ConeInput in = load_cone(opt, static_cast<int>(a.size()));
  require_matching(in.cone, a);
  EnumerateOptions eopt;
  eopt.num_starts = opt.starts;
  eopt.seed = opt.seed;
  eopt.tol = opt.tol;
  eopt.threads = opt.threads;
  const EnumerateResult res = enumerate_stationary_detailed(in.cone, a, eopt);

  CommandOutput out;
  out.inputs = Json{{"point", vector_json(a)}, {"cone", in.echo}, {"tol", opt.tol},
                    {"starts", opt.starts > 0 ? opt.starts : default_num_starts(in.cone.dimension())},
                    {"seed", opt.seed}};
  Json points = Json::array();
  Json kinds = Json::array();
  for (const auto& p : res.points) {
    points.push_back(stationary_point_json(in.cone, a, p, opt.tol));
    kinds.push_back(std::string(to_string(p.kind)));
  }
  out.result["count"] = res.points.size();
  out.result["kinds"] = kinds;
  out.result["stationary_points"] = points;
  out.diagnostics["starts_generated"] = res.starts_generated;
  out.diagnostics["starts_used"] = res.starts_used;
  out.diagnostics["converged"] = res.converged;
  if (plot) {
    double reach = a.norm();
    for (const auto& p : res.points) reach = std::max(reach, section(in.cone, p.plane).intercepts.maxCoeff());
    plot->rays(in.cone, reach);
    for (std::size_t k = 0; k < res.points.size(); ++k) {
      plot->section_loop("section_" + std::to_string(k + 1), section(in.cone, res.points[k].plane));
    }
    plot->polyline("point", {a});
  }
  return out;
}

CommandOutput cmd_classify_cone(const Options& opt, Plot& plot) {
  int dimension = opt.dimension;
  if (opt.cone_path.empty() && dimension == 0) {
    dimension = opt.preset == "angle2d" ? 2 : 3;
  }
  const ConeInput in = load_cone(opt, dimension);
  const Hyperangle& cone = in.cone;
  const int n = cone.dimension();

  CommandOutput out;
  out.inputs = Json{{"cone", in.echo}};
  Json gens = Json::array();
  for (int i = 0; i < n; ++i) gens.push_back(vector_json(Point(cone.generator(i))));
  Json duals = Json::array();
  const Matrix dual = cone.dual_generators();
  for (int i = 0; i < n; ++i) duals.push_back(vector_json(Point(dual.col(i).normalized())));
  out.result["dimension"] = n;
  out.result["generators"] = gens;
  out.result["abs_det"] = cone.abs_det();
  out.result["dual_generators"] = duals;
  out.result["k_subset_kstar"] = k_subset_kstar(cone);
  out.result["kstar_subset_k"] = kstar_subset_k(cone);
  Json angles = Json::array();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double c = std::clamp(cone.generator(i).dot(cone.generator(j)), -1.0, 1.0);
      angles.push_back(Json{{"pair", {i + 1, j + 1}}, {"degrees", std::acos(c) * 180.0 / std::numbers::pi}});
    }
  }
  out.result["ray_angles"] = angles;
  if (n == 3) {
    const auto angle = [&](int i, int j) {
      return std::acos(std::clamp(cone.generator(i).dot(cone.generator(j)), -1.0, 1.0));
    };
    out.result["trihedral_kstar_subset_k"] = trihedral_kstar_subset_k(angle(1, 2), angle(0, 2), angle(0, 1));
  }
  if (plot) plot->rays(cone, 1.0);
  return out;
}

CommandOutput cmd_philon(const Options& opt, Plot& plot) {
  const Point a = parse_point(opt.point);
  if (a.size() != 2) throw InputError{"--point", "philon expects a planar point"};
  double alpha_degrees = opt.alpha_degrees;
  if (!opt.cone_path.empty()) {
    throw InputError{"--cone", "philon takes --alpha, not a cone file"};
  }
  if (!(alpha_degrees > 0.0 && alpha_degrees < 180.0)) {
    throw InputError{"--alpha", "angle must lie in (0, 180) degrees"};
  }
  const double alpha = alpha_degrees * std::numbers::pi / 180.0;
  const Hyperangle cone = Hyperangle::angle2d(alpha);
  const Region2D region = philon2d_region(alpha, a);
  const auto sweep = oracle::residual_sign_sweep_2d(cone, a, opt.num_angles);

  CommandOutput out;
  out.inputs = Json{{"point", vector_json(a)}, {"alpha_degrees", alpha_degrees}, {"tol", opt.tol},
                    {"starts", opt.starts > 0 ? opt.starts : default_num_starts(2)}, {"seed", opt.seed}};
  out.result["region"] = Json{{"label", std::string(to_string(region.label))},
                              {"theta", region.theta},
                              {"theta_degrees", region.theta * 180.0 / std::numbers::pi},
                              {"expected_count", region.expected_count},
                              {"angle_from_bisector", region.angle_from_bisector},
                              {"boundary_t_distance", region.boundary_t_distance}};

  Json lines = Json::array();
  std::vector<StationaryPoint> found;
  bool in_minus_k = false;
  try {
    EnumerateOptions eopt;
    eopt.num_starts = opt.starts;
    eopt.seed = opt.seed;
    eopt.tol = opt.tol;
    eopt.threads = opt.threads;
    found = enumerate_stationary(cone, a, eopt);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DomainError) throw;
    in_minus_k = true;
  }
  for (const auto& p : found) lines.push_back(stationary_point_json(cone, a, p, opt.tol));
  out.result["count"] = found.size();
  out.result["stationary_lines"] = lines;
  Json sweep_json = Json::array();
  for (const auto& l : sweep) {
    sweep_json.push_back(Json{{"angle", l.angle}, {"plane_normal", vector_json(l.line.normal)},
                              {"length", l.length}, {"residual", l.residual}});
  }
  out.result["sweep_count"] = sweep.size();
  out.result["sweep_lines"] = sweep_json;
  out.diagnostics["num_angles"] = opt.num_angles;
  out.diagnostics["point_in_minus_k"] = in_minus_k;
  if (plot) {
    const double reach = 2.0 * a.norm();
    plot->rays(cone, reach);
    for (double side : {-1.0, 1.0}) {
      const double phi = alpha / 2.0 + side * region.theta;
      plot->polyline(side < 0 ? "T_boundary_1" : "T_boundary_2",
                     {Point::Zero(2), Point(reach * Point{{std::cos(phi), std::sin(phi)}})});
    }
    for (std::size_t k = 0; k < found.size(); ++k) {
      plot->section_loop("line_" + std::to_string(k + 1), section(cone, found[k].plane));
    }
    plot->polyline("point", {a});
  }
  return out;
}

CommandOutput cmd_shortest_segment(const Options& opt, Plot& plot) {
  const Point a = parse_point(opt.point);
  const double length = orthant::shortest_segment(a);
  CommandOutput out;
  out.inputs = Json{{"point", vector_json(a)}};
  out.result["length"] = length;
  if (a.size() >= 3) {
    const auto count = orthant::minimal_line_count(a);
    out.result["minimal_line_count"] = count.count;
    out.result["smallest_tie"] = count.smallest_tie;
    out.result["second_tie"] = count.second_tie;
    out.result["other_ties"] = count.other_ties;
  } else {
    out.result["minimal_line_count"] = 1;
  }
  if (plot) {
    plot->rays(Hyperangle::orthant(static_cast<int>(a.size())), a.maxCoeff() * 2.0);
    plot->polyline("point", {a});
  }
  return out;
}

CommandOutput cmd_boundary(const Options& opt, Plot& plot) {
  const Point a = parse_point(opt.point);
  const ConeInput in = load_cone(opt, static_cast<int>(a.size()));
  require_matching(in.cone, a);
  EnumerateOptions eopt;
  eopt.num_starts = opt.starts;
  eopt.seed = opt.seed;
  eopt.tol = opt.tol;
  eopt.threads = opt.threads;
  const BoundaryReport rep = boundary_infimum(in.cone, a, eopt);

  CommandOutput out;
  out.inputs = Json{{"point", vector_json(a)}, {"cone", in.echo}, {"tol", opt.tol}, {"seed", opt.seed}};
  out.result["m_A"] = rep.m_a;
  out.result["face_dimension"] = rep.face_dimension;
  out.result["attained_numerically"] = rep.attained_numerically;
  out.result["facet_minimum"] = rep.facet_minimum ? Json(*rep.facet_minimum) : Json(nullptr);
  Json gens = Json::array();
  for (int g : rep.facet_generators) gens.push_back(g + 1);
  out.result["facet_generators"] = gens;
  out.result["facet_solution"] = rep.facet_solution ? vector_json(*rep.facet_solution) : Json(nullptr);
  out.result["facet_centroid"] = rep.facet_centroid ? vector_json(*rep.facet_centroid) : Json(nullptr);
  out.result["degenerate_residual"] =
      rep.degenerate_residual ? Json(*rep.degenerate_residual) : Json(nullptr);
  Json points = Json::array();
  for (const auto& p : rep.stationary) points.push_back(stationary_point_json(in.cone, a, p, opt.tol));
  out.result["stationary_points"] = points;
  if (plot) {
    plot->rays(in.cone, 2.0 * a.norm());
    if (rep.facet_solution) {
      std::vector<Point> cut{Point::Zero(a.size())};
      for (std::size_t j = 0; j < rep.facet_generators.size(); ++j) {
        cut.push_back(in.cone.generator(rep.facet_generators[j]) * (*rep.facet_solution)[j]);
      }
      cut.push_back(cut.front());
      plot->polyline("facet_segment", cut);
    }
    plot->polyline("point", {a});
  }
  return out;
}

CommandOutput cmd_oracle(const Options& opt, Plot& plot) {
  const Point a = parse_point(opt.point);
  const ConeInput in = load_cone(opt, static_cast<int>(a.size()));
  require_matching(in.cone, a);
  oracle::GridSpec spec{opt.resolution, opt.levels, opt.shrink};
  const auto res = oracle::grid_refine_min(in.cone, a, spec);
  const StationarityReport rep = residual(in.cone, a, res.plane, opt.tol);
  const Section sec = section(in.cone, res.plane);

  CommandOutput out;
  out.inputs = Json{{"point", vector_json(a)}, {"cone", in.echo}, {"tol", opt.tol},
                    {"resolution", opt.resolution}, {"levels", opt.levels}, {"shrink", opt.shrink}};
  out.result["plane_normal"] = vector_json(res.plane.normal);
  out.result["volume"] = res.volume;
  out.result["residual_norm"] = rep.residual_norm;
  out.result["intercepts"] = vector_json(sec.intercepts);
  out.result["stationarity"] = stationarity_json(rep);
  out.result["evaluations"] = res.evaluations;
  out.diagnostics["evaluations"] = res.evaluations;
  if (plot) {
    plot->rays(in.cone, sec.intercepts.maxCoeff());
    plot->section_loop("section_1", sec);
    plot->polyline("point", {a});
  }
  return out;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--cone", opt.cone_path, "Cone specification (JSON file)");
  sub->add_option("--preset", opt.preset, "Built-in cone: orthant or angle2d");
  sub->add_option("--dimension", opt.dimension, "Dimension for the orthant preset");
  sub->add_option("--alpha", opt.alpha_degrees, "Planar angle in degrees");
  sub->add_option("--point", opt.point, "Point as comma-separated coordinates");
  sub->add_option("--tol", opt.tol, "Stationarity tolerance (relative to section diameter)");
  sub->add_option("--starts", opt.starts, "Number of multi-start seeds");
  sub->add_option("--seed", opt.seed, "Random seed");
  sub->add_option("--output", opt.output, "Output path, - for stdout");
  sub->add_option("--plot-data", opt.plot_data, "Write CSV polylines for plotting");
  sub->add_option("--threads", opt.threads, "Worker threads for multi-start runs");
}

spdlog::level::level_enum log_level() {
  const char* env = std::getenv("CONESLICE_LOG");
  if (env == nullptr) return spdlog::level::warn;
  return spdlog::level::from_str(env);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  spdlog::logger log("coneslice", sink);
  log.set_level(log_level());
  log.set_pattern("[%l] %v");

  CLI::App app{"Minimal cone cross-sections through a point", "coneslice"};
  app.require_subcommand(1);
  Options opt;
  struct Entry {
    const char* name;
    const char* help;
    CommandOutput (*fn)(const Options&, Plot&);
  };
  const std::vector<Entry> entries{
      {"orthant-solve", "Closed-form stationary section of the orthant", cmd_orthant_solve},
      {"solve", "Local minimizer for a general cone", cmd_solve},
      {"enumerate", "All stationary planes through a point", cmd_enumerate},
      {"classify-cone", "Duality predicates for a cone", cmd_classify_cone},
      {"philon", "Stationary lines of a planar angle", cmd_philon},
      {"shortest-segment", "Shortest orthant segment through a point", cmd_shortest_segment},
      {"boundary", "Infimum of section volumes at a boundary point", cmd_boundary},
      {"oracle", "Brute-force grid minimum", cmd_oracle},
  };
  std::vector<CLI::App*> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, opt);
    subs.push_back(sub);
  }
  subs[7]->add_option("--resolution", opt.resolution, "Grid points per dimension");
  subs[7]->add_option("--levels", opt.levels, "Refinement levels");
  subs[7]->add_option("--shrink", opt.shrink, "Box shrink factor per level");
  subs[4]->add_option("--angles", opt.num_angles, "Samples for the residual sweep");

  std::string command = args.empty() ? "" : args.front();
  const auto emit_error = [&](int code, std::string_view kind, const std::string& message,
                              const std::string& field) {
    Json j;
    j["command"] = command;
    j["error"] = Json{{"kind", kind}, {"message", message}};
    if (!field.empty()) j["error"]["field"] = field;
    j["version"] = kVersion;
    write_json(out, j);
    out << '\n';
    log.error("{}: {}", kind, message);
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return emit_error(kExitMalformed, "InvalidArguments", e.what(), "");
  }

  std::size_t index = 0;
  for (; index < subs.size(); ++index) {
    if (subs[index]->parsed()) break;
  }
  command = entries[index].name;
  if (opt.threads < 1) return emit_error(kExitMalformed, "InvalidArguments", "threads must be >= 1", "--threads");
  if (opt.starts < 0) return emit_error(kExitMalformed, "InvalidArguments", "starts must be >= 0", "--starts");
  if (!(opt.tol > 0.0)) return emit_error(kExitMalformed, "InvalidArguments", "tol must be positive", "--tol");

  const auto started = std::chrono::steady_clock::now();
  Plot plot;
  CommandOutput result;
  try {
    if (!opt.plot_data.empty()) {
      const Point a = opt.point.empty() ? Point::Zero(3) : parse_point(opt.point);
      plot.emplace(static_cast<int>(a.size()));
    }
    result = entries[index].fn(opt, plot);
  } catch (const InputError& e) {
    return emit_error(kExitMalformed, "InvalidInput", e.message, e.field);
  } catch (const Error& e) {
    const bool malformed = e.kind() == ErrorKind::DimensionMismatch;
    return emit_error(malformed ? kExitMalformed : kExitDomain, to_string(e.kind()), e.what(), "");
  }
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

  Json envelope;
  envelope["command"] = command;
  envelope["inputs"] = result.inputs;
  envelope["result"] = result.result;
  result.diagnostics["timings"] = Json{{"total_ms", elapsed_ms}};
  envelope["diagnostics"] = result.diagnostics;
  envelope["version"] = kVersion;

  if (plot) {
    if (!plot->supported()) log.warn("plot data covers the first three coordinates only");
    std::ofstream csv(opt.plot_data);
    if (!csv) return emit_error(kExitMalformed, "InvalidInput", "cannot write plot data", "--plot-data");
    csv << plot->str();
  }

  if (opt.output == "-") {
    write_json(out, envelope);
    out << '\n';
  } else {
    std::ofstream file(opt.output);
    if (!file) return emit_error(kExitMalformed, "InvalidInput", "cannot write output", "--output");
    write_json(file, envelope);
    file << '\n';
  }
  log.info("{} finished in {:.3f} ms", command, elapsed_ms);
  return kExitOk;
}

}  // namespace coneslice::cli
