#include "doctest.h"
#include "nil/errors.hpp"
#include "nil/projection.hpp"
#include "nil/rng.hpp"

using namespace nil;

TEST_CASE("fibre projection") {
  const Point2D a = fibre_project({0, 0, 5});
  CHECK(a.x == 0);
  CHECK(a.y == 0);
  const Point2D b = fibre_project({1, 2, 3});
  CHECK(b.x == 1);
  CHECK(b.y == 2);
  // projected geodesic endpoint equals the endpoint of the projected arc
  const GeodesicParams p{0.8, 0.6, 1.3};
  const Point base{0.2, -0.1, 0.4};
  const ArcDescriptor arc = projected_arc(base, p);
  const Point2D end = fibre_project(geodesic_point_from(base, p));
  CHECK(dist2d(arc.b, end) < 1e-12);
}

TEST_CASE("projected arc kinds") {
  // fibre: degenerate point
  const ArcDescriptor d = projected_arc({1, 2, 3}, {0.4, 0.5 * kPi, 2.0});
  CHECK(d.kind == ArcKind::DegeneratePoint);
  CHECK(d.a.x == 1);
  CHECK(d.a.y == 2);
  // planar: segment along the initial direction
  const ArcDescriptor s = projected_arc({0, 0, 0}, {0.0, 0.0, 2.0});
  CHECK(s.kind == ArcKind::LineSegment);
  CHECK(s.b.x == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(s.b.y) < 1e-15);
  // helix: circle with radius cot(theta), here cot(pi/4) = 1 centred at (0,1)
  const ArcDescriptor c = projected_arc({0, 0, 0}, {0.0, 0.25 * kPi, 1.0});
  CHECK(c.kind == ArcKind::CircleArc);
  CHECK(c.center.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(c.center.y == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.radius == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.orientation == +1);  // positive theta: counterclockwise
}

TEST_CASE("projected samples satisfy the circle equation") {
  Rng rng(31);
  double worst = 0;
  for (int k = 0; k < 2000; ++k) {
    GeodesicParams p{rng.range(-kPi, kPi), rng.range(-0.5 * kPi, 0.5 * kPi), rng.range(0.1, 3.0)};
    if (std::abs(p.w()) < 1e-3 || std::abs(p.w()) > 1 - 1e-9) continue;
    const ArcDescriptor arc = projected_arc({0, 0, 0}, p);
    for (double f : {0.1, 0.35, 0.7, 1.0}) {
      GeodesicParams q = p;
      q.t = p.t * f;
      const Point2D e = fibre_project(geodesic_point(q));
      worst = std::max(worst, std::abs(dist2d(e, arc.center) - arc.radius));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("arc length") {
  // closed form: (t2 - t1) cos(theta)
  const GeodesicParams p{0.3, kPi / 3, 2.0};
  const ArcDescriptor arc = projected_arc({0, 0, 0}, p);
  CHECK(arc_length(arc, 0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  const ArcDescriptor seg = projected_arc({0, 0, 0}, {0.7, 0.0, 2.0});
  CHECK(arc_length(seg, 0, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  // polyline oracle
  Rng rng(32);
  for (int k = 0; k < 5; ++k) {
    const GeodesicParams q{rng.range(-kPi, kPi), rng.range(-1.2, 1.2), rng.range(0.5, 2.5)};
    const ArcDescriptor a = projected_arc({0, 0, 0}, q);
    double poly = 0;
    Point2D prev = arc_point(a, 0);
    const int n = 10000;
    for (int i = 1; i <= n; ++i) {
      const Point2D cur = arc_point(a, q.t * i / n);
      poly += dist2d(prev, cur);
      prev = cur;
    }
    CHECK(std::abs(poly - arc_length(a, 0, q.t)) < 1e-8);
  }
  CHECK_THROWS_AS((void)arc_length(arc, 1.0, 0.5), Error);
}

TEST_CASE("ratio preservation under projection") {
  Rng rng(33);
  double worst = 0;
  for (int k = 0; k < 500; ++k) {
    GeodesicParams p{rng.range(-kPi, kPi), rng.range(-1.35, 1.35), rng.range(0.4, 2.5)};
    const double t1 = rng.range(0.05, p.t - 0.05);
    const double t2 = rng.range(t1 + 0.02, p.t);
    const ArcDescriptor arc = projected_arc({0, 0, 0}, p);
    const double arc_ratio = arc_length(arc, 0, t1) / arc_length(arc, t1, t2);
    worst = std::max(worst, std::abs(arc_ratio - t1 / (t2 - t1)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("circle through three points") {
  const ArcDescriptor c = circle_through({0, 0}, {2, 0}, {1, 1});
  CHECK(c.kind == ArcKind::CircleArc);
  // equidistance self-check
  for (const Point2D q : {Point2D{0, 0}, Point2D{2, 0}, Point2D{1, 1}})
    CHECK(std::abs(dist2d(c.center, q) - c.radius) < 1e-12);
  const ArcDescriptor l = circle_through({0, 0}, {1, 1}, {2, 2});
  CHECK(l.kind == ArcKind::LineSegment);
  CHECK_THROWS_AS((void)circle_through({0, 0}, {0, 0}, {1, 1}), Error);
  // recovering a projected arc's circle from three of its points
  const GeodesicParams p{0.9, 0.7, 1.6};
  const ArcDescriptor arc = projected_arc({0.3, 0.1, 0}, p);
  auto at = [&](double f) {
    GeodesicParams q = p;
    q.t = f * p.t;
    return fibre_project(geodesic_point_from({0.3, 0.1, 0}, q));
  };
  const ArcDescriptor rec = circle_through(at(0.1), at(0.5), at(0.9));
  CHECK(dist2d(rec.center, arc.center) < 1e-9);
  CHECK(std::abs(rec.radius - arc.radius) < 1e-9);
}

TEST_CASE("lift round trip") {
  Rng rng(34);
  for (int k = 0; k < 200; ++k) {
    GeodesicParams p{rng.range(-kPi, kPi), rng.range(-1.4, 1.4), rng.range(0.1, 2.5)};
    if (std::abs(p.w()) * p.t >= kTwoPi - 1e-3) continue;
    const Point base{rng.range(-1, 1), rng.range(-1, 1), rng.range(-1, 1)};
    const ArcDescriptor arc = projected_arc(base, p);
    const GeodesicParams lifted = lift_arc_params(arc, fibre_project(geodesic_point_from(base, p)));
    CHECK(std::abs(wrap_angle(lifted.alpha - p.alpha)) < 1e-9);
    CHECK(std::abs(lifted.theta - p.theta) < 1e-9);
    CHECK(std::abs(lifted.t - p.t) < 1e-9);
  }
}

TEST_CASE("lift special cases") {
  // line through origin
  ArcDescriptor line;
  line.kind = ArcKind::LineSegment;
  line.a = {0, 0};
  line.b = {3, 0};
  const GeodesicParams lp = lift_arc_params(line, {2, 0});
  CHECK(std::abs(lp.alpha) < 1e-15);
  CHECK(lp.theta == 0);
  CHECK(lp.t == doctest::Approx(2.0).epsilon(1e-15));
  // degenerate arc rejects off-fibre targets
  const ArcDescriptor d = projected_arc({1, 2, 3}, {0.0, 0.5 * kPi, 1.0});
  CHECK_THROWS_AS((void)lift_arc_params(d, {1.5, 2}), Error);
  // off-circle target rejected
  const ArcDescriptor c = projected_arc({0, 0, 0}, {0.0, 0.25 * kPi, 1.0});
  CHECK_THROWS_AS((void)lift_arc_params(c, {5, 5}), Error);
  // arcs winding a full turn or more are ambiguous and rejected
  const GeodesicParams winding{0.0, 0.25 * kPi, kTwoPi / std::sin(0.25 * kPi) + 0.3};
  const ArcDescriptor full = projected_arc({0, 0, 0}, winding);
  try {
    (void)lift_arc_params(full, full.b);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::OutOfModelRange);
  }
}
