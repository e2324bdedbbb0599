#include "doctest.h"
#include "nil/errors.hpp"
#include "nil/rng.hpp"
#include "nil/triangle.hpp"

using namespace nil;

namespace {
const Point kA0{1, 0, 0};
const Point kA1{1.0 / 3.0, 2, 1};
const Point kA2{0.5, -1, 1};

TriangleSurface make_surface(int n = 8) {
  SurfacePointOptions so;
  so.certify = false;
  return triangle_surface_mesh(kA0, kA1, kA2, n, so);
}
}  // namespace

TEST_CASE("simple ratio") {
  const Point A{0.1, -0.2, 0.3}, B{0.9, 0.7, -0.1};
  const Point mid = point_at_ratio(A, B, 1.0);
  CHECK(simple_ratio(A, mid, B).value == doctest::Approx(1.0).epsilon(1e-8));
  // beyond B at twice the distance
  const Point beyond = point_at_ratio(A, B, -2.0);
  CHECK(simple_ratio(A, beyond, B).value == doctest::Approx(-2.0).epsilon(1e-6));
  for (double s : {0.5, 1.0, 3.0, -2.0, -0.25}) {
    const Point P = point_at_ratio(A, B, s);
    CHECK(simple_ratio(A, P, B).value == doctest::Approx(s).epsilon(1e-6));
    CHECK(simple_ratio(A, P, B).residual < 1e-8);
  }
  // off-line point rejected
  CHECK_THROWS_AS((void)simple_ratio(A, {0.5, 0.5, 0.5}, B), Error);
}

TEST_CASE("ratio anchor point") {
  // s(A1,P1,A0) = 1, s(A0,P2,A2) = 2 -> anchor ratio -1/2 on the A2A1 line
  const Point P1 = point_at_ratio(kA1, kA0, 1.0);
  const Point P2 = point_at_ratio(kA0, kA2, 2.0);
  const Point P3 = menelaus_point(kA0, kA1, kA2, P1, P2);
  CHECK(simple_ratio(kA2, P3, kA1).value == doctest::Approx(-0.5).epsilon(1e-6));
  // the ordered product closes to -1 by construction
  const double prod = simple_ratio(kA1, P1, kA0).value * simple_ratio(kA0, P2, kA2).value *
                      simple_ratio(kA2, P3, kA1).value;
  CHECK(prod == doctest::Approx(-1.0).epsilon(1e-6));
  // both midpoints must be routed to the midline case
  const Point M1 = point_at_ratio(kA1, kA0, 1.0);
  const Point M2 = point_at_ratio(kA0, kA2, 1.0);
  CHECK_THROWS_AS((void)menelaus_point(kA0, kA1, kA2, M1, M2), Error);
}

TEST_CASE("ordered product on random side configurations") {
  Rng rng(51);
  int accepted = 0;
  double worst = 0;
  for (int k = 0; k < 300 && accepted < 40; ++k) {
    const double s1 = rng.range(0.2, 5.0), s2 = rng.range(0.2, 5.0);
    if (std::abs(s1 * s2 - 1) < 0.4) continue;
    try {
      const Point P1 = point_at_ratio(kA1, kA0, s1);
      const Point P2 = point_at_ratio(kA0, kA2, s2);
      const Point P3 = menelaus_point(kA0, kA1, kA2, P1, P2);
      const double prod = simple_ratio(kA1, P1, kA0).value * simple_ratio(kA0, P2, kA2).value *
                          simple_ratio(kA2, P3, kA1).value;
      worst = std::max(worst, std::abs(prod + 1.0));
      ++accepted;
    } catch (const Error& e) {
      if (e.kind != ErrorKind::OutOfModelRange) throw;
    }
  }
  CHECK(accepted >= 40);
  CHECK(worst < 1e-6);
}

TEST_CASE("surface line on a common fibre") {
  // two vertices on one fibre: that side is a vertical segment of the surface
  const Point B0{0, 0, 0}, B1{0, 0, 1}, B2{1, 0.5, 0.3};
  CHECK(classify_triangle(B0, B1, B2) == TriangleType::FibreType);
  SurfacePointOptions so;
  so.certify = false;
  const TriangleSurface surf = triangle_surface_mesh(B0, B1, B2, 8, so);
  const Point P1{0, 0, 0.3}, P2{0, 0, 0.8};
  SurfaceLineOptions lo;
  lo.samples = 7;
  const SurfaceLine line = surface_line(surf, P1, P2, lo);
  CHECK(line.kind == SurfaceLineCase::FibreSegment);
  CHECK(line.samples.size() == 7);
  for (const Point& q : line.samples) {
    CHECK(q.x == 0.0);
    CHECK(q.y == 0.0);
  }
  CHECK(line.samples.front().z == doctest::Approx(0.3));
  CHECK(line.samples.back().z == doctest::Approx(0.8));

  const TriangleSurface gsurf = make_surface();
  const Point on1 = point_at_ratio(kA0, kA1, 0.8);
  SUBCASE("distinct points required") {
    CHECK_THROWS_AS((void)surface_line(gsurf, on1, on1, {}), Error);
  }
}

TEST_CASE("surface line reproduces a side geodesic") {
  const TriangleSurface surf = make_surface();
  const Point P1 = point_at_ratio(kA0, kA1, 0.25 / 0.75);
  const Point P2 = point_at_ratio(kA0, kA1, 0.7 / 0.3);
  SurfaceLineOptions lo;
  lo.samples = 9;
  const SurfaceLine line = surface_line(surf, P1, P2, lo);
  CHECK(line.kind == SurfaceLineCase::SideGeodesic);
  const GeodesicSolution sol = solve_geodesic_fast(P1, P2);
  for (std::size_t i = 0; i < line.samples.size(); ++i) {
    GeodesicParams g = sol.params;
    g.t = sol.params.t * static_cast<double>(i) / (line.samples.size() - 1);
    CHECK(euclid_dist(line.samples[i], geodesic_point_from(P1, g)) < 1e-6);
  }
}

TEST_CASE("anchored line through two side points") {
  const TriangleSurface surf = make_surface();
  // P1 inside side A0A1, P2 inside side A0A2, chosen with a reachable anchor
  const Point P1 = point_at_ratio(kA0, kA1, 0.55);
  const Point P2 = point_at_ratio(kA0, kA2, 1.9);
  SurfaceLineOptions lo;
  lo.samples = 9;
  const SurfaceLine line = surface_line(surf, P1, P2, lo);
  CHECK(line.kind == SurfaceLineCase::ChordArc);
  CHECK(line.arc.kind == ArcKind::CircleArc);
  CHECK(euclid_dist(line.samples.front(), P1) < 1e-9);
  CHECK(euclid_dist(line.samples.back(), P2) < 1e-9);
  // endpoints of the generating circle pass through the projections
  CHECK(std::abs(dist2d(fibre_project(P1), line.arc.center) - line.arc.radius) < 1e-9);
  CHECK(std::abs(dist2d(fibre_project(P2), line.arc.center) - line.arc.radius) < 1e-9);
  // samples are surface points: their ratio constraints hold
  for (const Point& q : line.samples) {
    const auto [l1, l2] = surface_ratios(kA0, kA1, kA2, q);
    const double d0 = distance(kA0, q);
    CHECK(std::abs(d0 - l1 * distance(q, kA1)) < 1e-5);
    CHECK(std::abs(distance(kA2, q) - l2 * d0) < 1e-5);
  }

  SUBCASE("two interior points of the line regenerate the same circle") {
    const Point q1 = line.samples[3];
    const Point q2 = line.samples[6];
    const SurfaceLine regen = surface_line(surf, q1, q2, lo);
    CHECK(regen.arc.kind == ArcKind::CircleArc);
    CHECK(dist2d(regen.arc.center, line.arc.center) < 1e-6);
    CHECK(std::abs(regen.arc.radius - line.arc.radius) < 1e-6);
  }
}

TEST_CASE("midline case uses the third side's helix parameter") {
  const TriangleSurface surf = make_surface();
  const Point M1 = point_at_ratio(kA0, kA1, 1.0);
  const Point M2 = point_at_ratio(kA0, kA2, 1.0);
  SurfaceLineOptions lo;
  lo.samples = 7;
  const SurfaceLine line = surface_line(surf, M1, M2, lo);
  CHECK(line.kind == SurfaceLineCase::Midline);
  const GeodesicSolution third = solve_geodesic_fast(kA1, kA2);
  CHECK(line.theta_g == doctest::Approx(third.params.theta).epsilon(1e-9));
  CHECK(std::abs(line.arc.radius - std::abs(third.params.c() / third.params.w())) < 1e-9);
}

TEST_CASE("cevian line from a vertex to its foot") {
  const TriangleSurface surf = make_surface();
  const Point foot = point_at_ratio(kA1, kA2, 1.3);  // on the opposite side of A0
  SurfaceLineOptions lo;
  lo.samples = 7;
  const SurfaceLine line = surface_line(surf, kA0, foot, lo);
  CHECK(line.kind == SurfaceLineCase::Cevian);
  CHECK(euclid_dist(line.samples.front(), kA0) < 1e-9);
  CHECK(euclid_dist(line.samples.back(), foot) < 1e-9);
}

TEST_CASE("points off the surface are rejected") {
  const TriangleSurface surf = make_surface();
  const Point off{2.5, 2.5, -3.0};
  const Point on = point_at_ratio(kA0, kA1, 1.0);
  try {
    (void)surface_line(surf, off, on, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::NotOnSurface);
  }
}

TEST_CASE("ceva configuration") {
  CevaOptions co;
  co.build_lines = false;
  co.lift_t = false;
  SUBCASE("median configuration") {
    const CevaConfig cfg = ceva_config(kA0, kA1, kA2, 1.0, 1.0, co);
    CHECK(cfg.delta3 == doctest::Approx(1.0));
    CHECK(ceva_product(cfg) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(ceva_product_projected(cfg) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("worked ratios") {
    const CevaConfig cfg = ceva_config(kA0, kA1, kA2, 2.0, 0.5, co);
    CHECK(cfg.delta3 == doctest::Approx(1.0).epsilon(1e-12));  // midpoint foot
    CHECK(std::abs(ceva_product(cfg) - 1.0) < 1e-6);
    CHECK(std::abs(ceva_product_projected(cfg) - 1.0) < 1e-6);
    CHECK(simple_ratio(kA1, cfg.P12, kA2).value == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(simple_ratio(kA2, cfg.P02, kA0).value == doctest::Approx(0.5).epsilon(1e-8));
  }
  SUBCASE("another grid point") {
    const CevaConfig cfg = ceva_config(kA0, kA1, kA2, 3.0, 2.0, co);
    CHECK(std::abs(ceva_product(cfg) - 1.0) < 1e-6);
    CHECK(std::abs(ceva_product_projected(cfg) - 1.0) < 1e-6);
  }
  SUBCASE("degenerate ratios rejected") {
    CHECK_THROWS_AS((void)ceva_config(kA0, kA1, kA2, 0.0, 1.0, co), Error);
  }
  SUBCASE("arc ratios match distance ratios at the feet") {
    const CevaConfig cfg = ceva_config(kA0, kA1, kA2, 2.0, 0.5, co);
    // s^c along each side equals the defining s^N ratio
    const GeodesicSolution s12 = solve_geodesic_fast(kA1, kA2);
    const ArcDescriptor arc12 = projected_arc(kA1, s12.params);
    const double t_foot = solve_geodesic_fast(kA1, cfg.P12).params.t;
    const double sc = arc_length(arc12, 0, t_foot) / arc_length(arc12, t_foot, s12.params.t);
    CHECK(sc == doctest::Approx(2.0).epsilon(1e-8));
  }
}

TEST_CASE("projected product degenerates for fibre type") {
  const Point B0{0, 0, 0}, B1{1, 0, 1}, B2{2, 0, 0.5};
  CevaOptions co;
  co.build_lines = false;
  co.lift_t = false;
  const CevaConfig cfg = ceva_config(B0, B1, B2, 1.0, 1.0, co);
  CHECK_THROWS_AS((void)ceva_product_projected(cfg), Error);
}

TEST_CASE("ceva with lifted interior point and lines") {
  SurfacePointOptions so;
  so.certify = false;
  const TriangleSurface surf = triangle_surface_mesh(kA0, kA1, kA2, 8, so);
  CevaOptions co;
  co.surface = &surf;
  co.line_samples = 7;
  const CevaConfig cfg = ceva_config(kA0, kA1, kA2, 2.0, 0.5, co);
  REQUIRE(cfg.T.has_value());
  CHECK(dist2d(fibre_project(*cfg.T), cfg.T_star) < 1e-6);
  REQUIRE(cfg.lines.size() == 3);
  CHECK(euclid_dist(cfg.lines[0].p1, kA0) == 0);
  CHECK(euclid_dist(cfg.lines[0].p2, cfg.P12) == 0);
  // the first two cevian arcs pass through T_star by construction
  for (int i = 0; i < 2; ++i) {
    const auto& arc = cfg.lines[i].arc;
    CHECK(std::abs(dist2d(cfg.T_star, arc.center) - arc.radius) < 1e-9);
  }
  // the third misses by the recorded amount
  const auto& a2 = cfg.lines[2].arc;
  CHECK(std::abs(dist2d(cfg.T_star, a2.center) - a2.radius) ==
        doctest::Approx(cfg.third_cevian_miss).epsilon(1e-9));
}
