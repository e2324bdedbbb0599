// Command-line interface: geodesic distances, spheres, Apollonius and
// triangle surfaces, surface lines and Ceva configurations, plus the
// deterministic invariant suites.

#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nil/errors.hpp"
#include "nil/io.hpp"
#include "nil/triangle.hpp"
#include "nil/verify.hpp"

using nlohmann::ordered_json;

namespace {

int exit_code_for(const nil::Error& e) {
  switch (e.kind) {
    case nil::ErrorKind::InvalidInput:
    case nil::ErrorKind::InvalidResolution:
    case nil::ErrorKind::DuplicatePoints:
      return 2;
    case nil::ErrorKind::RadiusBound:
    case nil::ErrorKind::OutOfModelRange:
      return 4;
    default:
      return 3;
  }
}

ordered_json point_json(const nil::Point& p) { return ordered_json::array({p.x, p.y, p.z}); }

ordered_json params_json(const nil::GeodesicParams& p) {
  return ordered_json{{"alpha", p.alpha}, {"theta", p.theta}, {"t", p.t}};
}

ordered_json checks_json(const std::vector<nil::CheckResult>& checks) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json j{{"id", c.id},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}};
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(j);
  }
  return arr;
}

void emit_report(const ordered_json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) nil::fail(nil::ErrorKind::InvalidInput, "cannot open output file: " + out_path);
    f << text;
  }
}

struct CommonFlags {
  std::string out;
  std::string format = "json";
  int jobs = 0;
  std::uint64_t seed = 42;
  double tol_solver = 1e-9;
  double tol_surface = 1e-5;
  double tol_ratio = 1e-6;
};

void add_common(CLI::App* cmd, CommonFlags& cf) {
  cmd->set_config("--config", "", "flat key=value configuration file; flags override");
  cmd->add_option("--out", cf.out, "output file (default: stdout for reports)");
  cmd->add_option("--format", cf.format, "obj|csv|json")->check(CLI::IsMember({"obj", "csv", "json"}));
  cmd->add_option("--jobs", cf.jobs, "parallelism degree (0 = hardware, 1 = serial)");
  cmd->add_option("--seed", cf.seed, "seed for randomized suites");
  cmd->add_option("--tol-solver", cf.tol_solver, "distance solver residual tolerance");
  cmd->add_option("--tol-surface", cf.tol_surface, "surface membership tolerance");
  cmd->add_option("--tol-ratio", cf.tol_ratio, "ratio check tolerance");
}

void write_mesh(const nil::Mesh& mesh, const CommonFlags& cf, const std::string& fallback) {
  const std::string path = cf.out.empty() ? fallback : cf.out;
  if (cf.format == "csv")
    nil::write_mesh_csv(mesh, path);
  else
    nil::write_obj(mesh, path);
  std::cerr << "mesh: " << mesh.vertices.size() << " vertices, " << mesh.triangles.size()
            << " triangles -> " << path << "\n";
}

class Timer {
 public:
  explicit Timer(const std::string& label) : label_(label), t0_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::cerr << label_ << ": " << dt << " s\n";
  }

 private:
  std::string label_;
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg-model geometry engine"};
  app.require_subcommand(1);

  std::string from_s, to_s, box_s, lambda_s = "1";
  std::vector<std::string> triangle_s;
  double R = 1.0, d1 = 1.0, d2 = 1.0, l1 = -1.0, l2 = -1.0;
  int n = 32;
  std::string suite = "all";

  CommonFlags cf;

  auto* c_dist = app.add_subcommand("distance", "geodesic distance between two points");
  c_dist->add_option("--from", from_s)->required();
  c_dist->add_option("--to", to_s)->required();
  add_common(c_dist, cf);

  auto* c_geo = app.add_subcommand("geodesic", "two-point geodesic with sampled curve");
  c_geo->add_option("--from", from_s)->required();
  c_geo->add_option("--to", to_s)->required();
  c_geo->add_option("--n", n, "curve samples");
  add_common(c_geo, cf);

  auto* c_sphere = app.add_subcommand("sphere", "geodesic sphere mesh");
  c_sphere->add_option("--center", from_s, "sphere centre (default origin)");
  c_sphere->add_option("--R", R, "radius in (0, 2*pi]")->required();
  c_sphere->add_option("--n", n, "grid resolution per direction");
  add_common(c_sphere, cf);

  auto* c_apo = app.add_subcommand("apollonius", "ratio surface of two foci");
  c_apo->add_option("--from", from_s, "focus P1")->required();
  c_apo->add_option("--to", to_s, "focus P2")->required();
  c_apo->add_option("--lambda", lambda_s, "distance ratio (>= 0, or 'inf')");
  c_apo->add_option("--box", box_s, "sampling box x0,y0,z0,x1,y1,z1 (default: around the foci)");
  c_apo->add_option("--n", n, "lattice resolution");
  add_common(c_apo, cf);

  auto* c_tri = app.add_subcommand("triangle-surface", "sampled triangle surface");
  c_tri->add_option("--triangle", triangle_s, "three vertices")->expected(3)->required();
  c_tri->add_option("--n", n, "ratio-grid steps");
  c_tri->add_option("--l1", l1, "single-point query: first ratio");
  c_tri->add_option("--l2", l2, "single-point query: second ratio");
  add_common(c_tri, cf);

  auto* c_line = app.add_subcommand("surface-line", "connecting line of two surface points");
  c_line->add_option("--triangle", triangle_s, "three vertices")->expected(3)->required();
  c_line->add_option("--from", from_s, "first point")->required();
  c_line->add_option("--to", to_s, "second point")->required();
  c_line->add_option("--n", n, "curve samples");
  add_common(c_line, cf);

  auto* c_ceva = app.add_subcommand("ceva", "cevian configuration from two feet ratios");
  c_ceva->add_option("--triangle", triangle_s, "three vertices")->expected(3)->required();
  c_ceva->add_option("--d1", d1, "ratio of the foot on side A1A2")->required();
  c_ceva->add_option("--d2", d2, "ratio of the foot on side A2A0")->required();
  c_ceva->add_option("--n", n, "samples per cevian line");
  add_common(c_ceva, cf);

  auto* c_verify = app.add_subcommand("verify", "deterministic invariant suites");
  c_verify->add_option("--suite", suite, "core|geodesic|solver|projection|sphere|ceva|lines|all");
  add_common(c_verify, cf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // bad flags or config: invalid input
  }

  try {
    const nil::ParallelOptions par{cf.jobs};

    if (c_dist->parsed() || c_geo->parsed()) {
      Timer timer("solve");
      const nil::Point p = nil::parse_point(from_s);
      const nil::Point q = nil::parse_point(to_s);
      nil::SolverOptions so;
      so.tol = cf.tol_solver;
      const nil::GeodesicSolution sol = nil::solve_geodesic(p, q, so);
      ordered_json rep{{"command", c_dist->parsed() ? "distance" : "geodesic"},
                       {"from", point_json(p)},
                       {"to", point_json(q)},
                       {"distance", sol.params.t},
                       {"params", params_json(sol.params)},
                       {"residual", sol.residual},
                       {"branch_count", sol.branch_count},
                       {"checks", ordered_json::array(
                                      {{{"id", "solver-endpoint-residual"},
                                        {"measured", sol.residual},
                                        {"tolerance", cf.tol_solver},
                                        {"pass", sol.residual <= cf.tol_solver}}})}};
      ordered_json branches = ordered_json::array();
      for (const auto& b : sol.branches) branches.push_back(params_json(b));
      rep["branches"] = branches;
      ordered_json warnings = ordered_json::array();
      if (sol.ambiguous_beyond_injectivity) warnings.push_back("multiple solutions within range");
      if (sol.beyond_model_range) warnings.push_back("arc length beyond 2*pi");
      rep["warnings"] = warnings;
      if (c_geo->parsed()) {
        std::vector<nil::CurveSample> curve;
        for (int i = 0; i < std::max(2, n); ++i) {
          nil::GeodesicParams g = sol.params;
          g.t = sol.params.t * i / (std::max(2, n) - 1);
          curve.push_back({nil::geodesic_point_from(p, g), g.t});
        }
        if (!cf.out.empty()) {
          nil::write_curve_csv(curve, cf.out);
          std::cerr << "curve -> " << cf.out << "\n";
          std::cout << rep.dump(2) << "\n";
          return 0;
        }
      }
      emit_report(rep, c_dist->parsed() ? cf.out : "");
      return 0;
    }

    if (c_sphere->parsed()) {
      Timer timer("sphere");
      const nil::Point center = from_s.empty() ? nil::Point{0, 0, 0} : nil::parse_point(from_s);
      const nil::SphereSpec spec(center, R);
      const nil::Mesh mesh = nil::sphere_mesh(spec, std::max(3, n), std::max(3, n), par);
      double worst = 0;
      for (const auto& v : mesh.vertices)
        worst = std::max(worst, std::abs(nil::distance(spec.center, v) - spec.R));
      write_mesh(mesh, cf, "sphere.obj");
      ordered_json rep{{"command", "sphere"},
                       {"R", R},
                       {"vertices", mesh.vertices.size()},
                       {"triangles", mesh.triangles.size()},
                       {"euler_characteristic", mesh.euler_characteristic()},
                       {"checks",
                        checks_json({{"sphere-vertex-distance", worst, 1e-6, worst <= 1e-6, ""}})}};
      std::cout << rep.dump(2) << "\n";
      return 0;
    }

    if (c_apo->parsed()) {
      Timer timer("apollonius");
      const nil::Point p1 = nil::parse_point(from_s);
      const nil::Point p2 = nil::parse_point(to_s);
      const bool inf = lambda_s == "inf";
      const double lambda = inf ? 0.0 : std::stod(lambda_s);
      const nil::ApolloniusSpec spec(p1, p2, lambda, inf);
      nil::Box box;
      if (box_s.empty()) {
        const double d = nil::euclid_dist(p1, p2);
        const double m = 1.5 * d + 0.5;
        const nil::Point mid{0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y), 0.5 * (p1.z + p2.z)};
        box = {{mid.x - m, mid.y - m, mid.z - m}, {mid.x + m, mid.y + m, mid.z + m}};
      } else {
        box = nil::parse_box(box_s);
      }
      const nil::Mesh mesh = nil::apollonius_sample(spec, box, n, par);
      double worst = 0;
      for (const auto& v : mesh.vertices)
        worst = std::max(worst, std::abs(nil::apollonius_field(spec, v)));
      write_mesh(mesh, cf, "apollonius.obj");
      const double tol = 1e-4 * box.diagonal();
      ordered_json rep{{"command", "apollonius"},
                       {"lambda", inf ? ordered_json("inf") : ordered_json(lambda)},
                       {"vertices", mesh.vertices.size()},
                       {"triangles", mesh.triangles.size()},
                       {"checks", checks_json({{"apollonius-vertex-field-residual", worst, tol,
                                                worst <= tol, ""}})}};
      std::cout << rep.dump(2) << "\n";
      return 0;
    }

    if (c_tri->parsed()) {
      Timer timer("triangle-surface");
      const nil::Point A0 = nil::parse_point(triangle_s[0]);
      const nil::Point A1 = nil::parse_point(triangle_s[1]);
      const nil::Point A2 = nil::parse_point(triangle_s[2]);
      if (l1 >= 0 && l2 >= 0) {
        nil::SurfacePointOptions po;
        po.constraint_tol = cf.tol_surface / 10;
        po.seed = static_cast<unsigned>(cf.seed);
        const auto r = nil::triangle_surface_point(A0, A1, A2, l1, l2, po);
        ordered_json rep{{"command", "triangle-surface"},
                         {"l1", l1},
                         {"l2", l2},
                         {"point", point_json(r.p)},
                         {"constraint_residuals", ordered_json::array({r.c1, r.c2})},
                         {"warnings", r.ambiguous
                                          ? ordered_json::array({"minimizer ambiguous"})
                                          : ordered_json::array()}};
        emit_report(rep, cf.out);
        return 0;
      }
      nil::SurfacePointOptions so;
      so.constraint_tol = cf.tol_surface / 10;
      so.seed = static_cast<unsigned>(cf.seed);
      const nil::TriangleSurface surf =
          nil::triangle_surface_mesh(A0, A1, A2, std::max(4, n), so, par);
      const nil::Mesh mesh = nil::surface_to_mesh(surf);
      write_mesh(mesh, cf, "triangle_surface.obj");
      ordered_json holes = ordered_json::array();
      for (const auto& h : surf.holes) holes.push_back(ordered_json::array({h[0], h[1]}));
      ordered_json rep{{"command", "triangle-surface"},
                       {"type", surf.type == nil::TriangleType::FibreType ? "fibre-type"
                                                                          : "general-type"},
                       {"grid", surf.n},
                       {"vertices", mesh.vertices.size()},
                       {"holes", holes}};
      std::cout << rep.dump(2) << "\n";
      return 0;
    }

    if (c_line->parsed()) {
      Timer timer("surface-line");
      const nil::Point A0 = nil::parse_point(triangle_s[0]);
      const nil::Point A1 = nil::parse_point(triangle_s[1]);
      const nil::Point A2 = nil::parse_point(triangle_s[2]);
      const nil::Point P1 = nil::parse_point(from_s);
      const nil::Point P2 = nil::parse_point(to_s);
      nil::SurfacePointOptions so;
      so.certify = false;
      const nil::TriangleSurface surf = nil::triangle_surface_mesh(A0, A1, A2, 10, so, par);
      nil::SurfaceLineOptions lo;
      lo.samples = std::max(5, n);
      lo.membership_tol = cf.tol_surface;
      const nil::SurfaceLine line = nil::surface_line(surf, P1, P2, lo);
      std::vector<nil::CurveSample> curve;
      for (std::size_t i = 0; i < line.samples.size(); ++i)
        curve.push_back({line.samples[i], static_cast<double>(i)});
      if (!cf.out.empty()) {
        nil::write_curve_csv(curve, cf.out);
        std::cerr << "curve -> " << cf.out << "\n";
      }
      ordered_json gaps = ordered_json::array();
      for (const auto& g : line.gaps) gaps.push_back(ordered_json::array({g.first, g.second}));
      ordered_json rep{{"command", "surface-line"},
                       {"case", nil::surface_line_case_name(line.kind)},
                       {"theta_g", line.theta_g},
                       {"samples", line.samples.size()},
                       {"gaps", gaps},
                       {"warnings", line.root_multiplicity
                                        ? ordered_json::array({"pencil root multiplicity"})
                                        : ordered_json::array()}};
      std::cout << rep.dump(2) << "\n";
      return 0;
    }

    if (c_ceva->parsed()) {
      Timer timer("ceva");
      const nil::Point A0 = nil::parse_point(triangle_s[0]);
      const nil::Point A1 = nil::parse_point(triangle_s[1]);
      const nil::Point A2 = nil::parse_point(triangle_s[2]);
      nil::CevaOptions co;
      co.line_samples = std::max(5, n);
      const nil::CevaConfig cfg = nil::ceva_config(A0, A1, A2, d1, d2, co);
      ordered_json warnings = ordered_json::array();
      if (cfg.third_cevian_flag)
        warnings.push_back("third cevian arc misses the intersection by " +
                           nil::format_double(cfg.third_cevian_miss));
      if (cfg.intersection_multiplicity) warnings.push_back("cevian arcs cross more than once");
      const double sn = nil::ceva_product(cfg);
      double sc = 0;
      bool sc_ok = true;
      try {
        sc = nil::ceva_product_projected(cfg);
      } catch (const nil::Error& e) {
        if (e.kind != nil::ErrorKind::DegenerateProjection) throw;
        sc_ok = false;
        warnings.push_back("projected product undefined: projection degenerates");
      }
      ordered_json rep{
          {"command", "ceva"},
          {"delta", ordered_json::array({cfg.delta1, cfg.delta2, cfg.delta3})},
          {"feet",
           ordered_json{{"P12", point_json(cfg.P12)}, {"P02", point_json(cfg.P02)},
                        {"P01", point_json(cfg.P01)}}},
          {"T_star", ordered_json::array({cfg.T_star.x, cfg.T_star.y})},
          {"T", cfg.T ? point_json(*cfg.T) : ordered_json()},
          {"ratio_product", sn},
          {"projected_ratio_product", sc_ok ? ordered_json(sc) : ordered_json()},
          {"third_cevian_miss", cfg.third_cevian_miss},
          {"checks", checks_json(
               sc_ok ? std::vector<nil::CheckResult>{{"ceva-ratio-product", std::abs(sn - 1),
                                                      cf.tol_ratio,
                                                      std::abs(sn - 1) <= cf.tol_ratio, ""},
                                                     {"ceva-projected-product", std::abs(sc - 1),
                                                      cf.tol_ratio,
                                                      std::abs(sc - 1) <= cf.tol_ratio, ""}}
                     : std::vector<nil::CheckResult>{{"ceva-ratio-product", std::abs(sn - 1),
                                                      cf.tol_ratio,
                                                      std::abs(sn - 1) <= cf.tol_ratio, ""}})},
          {"warnings", warnings}};
      emit_report(rep, cf.out);
      return 0;
    }

    if (c_verify->parsed()) {
      Timer timer("verify");
      const auto checks = nil::run_suite(suite, cf.seed, par);
      bool all_pass = true;
      for (const auto& c : checks) all_pass &= c.pass;
      ordered_json rep{{"command", "verify"},
                       {"suite", suite},
                       {"seed", cf.seed},
                       {"checks", checks_json(checks)},
                       {"pass", all_pass}};
      emit_report(rep, cf.out);
      return all_pass ? 0 : 3;
    }
  } catch (const nil::Error& e) {
    std::cerr << "error (" << nil::error_kind_name(e.kind) << "): " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
