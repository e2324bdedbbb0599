#include "nil/projection.hpp"

#include <algorithm>
#include <cmath>

#include "nil/errors.hpp"

namespace nil {

namespace {

constexpr double kLineW = 1e-12;     // |w| below this projects to a line
constexpr double kFibreC = 1e-16;    // |c| below this projects to a point

double positive_span(double delta) {  // into [0, 2*pi)
  double d = std::fmod(delta, kTwoPi);
  if (d < 0) d += kTwoPi;
  return d;
}

}  // namespace

ArcDescriptor projected_arc(const Point& base, const GeodesicParams& params) {
  ArcDescriptor arc;
  arc.has_provenance = true;
  arc.base = base;
  arc.params = params;
  const Point2D b0 = fibre_project(base);
  const double c = params.c(), w = params.w();
  if (std::abs(c) < kFibreC) {
    arc.kind = ArcKind::DegeneratePoint;
    arc.a = arc.b = b0;
    return arc;
  }
  if (std::abs(w) < kLineW) {
    arc.kind = ArcKind::LineSegment;
    arc.a = b0;
    arc.b = {b0.x + c * params.t * std::cos(params.alpha),
             b0.y + c * params.t * std::sin(params.alpha)};
    return arc;
  }
  arc.kind = ArcKind::CircleArc;
  const double r = c / w;  // signed
  arc.center = {b0.x - r * std::sin(params.alpha), b0.y + r * std::cos(params.alpha)};
  arc.radius = std::abs(r);
  arc.orientation = w > 0 ? +1 : -1;
  // Angular position of the point at parameter t is w*t + alpha - sign(w)*pi/2.
  arc.start_angle = params.alpha - arc.orientation * 0.5 * kPi;
  arc.end_angle = arc.start_angle + w * params.t;
  arc.a = b0;
  arc.b = arc_point(arc, params.t);
  return arc;
}

Point2D arc_point(const ArcDescriptor& arc, double t) {
  if (!arc.has_provenance) fail(ErrorKind::InvalidInput, "arc_point needs a generating geodesic");
  const double c = arc.params.c(), w = arc.params.w();
  const Point2D b0 = fibre_project(arc.base);
  if (arc.kind == ArcKind::DegeneratePoint) return b0;
  if (arc.kind == ArcKind::LineSegment)
    return {b0.x + c * t * std::cos(arc.params.alpha), b0.y + c * t * std::sin(arc.params.alpha)};
  const double r = c / w;
  const double u = w * t + arc.params.alpha;
  return {arc.center.x + r * std::sin(u), arc.center.y - r * std::cos(u)};
}

double arc_length(const ArcDescriptor& arc, double t1, double t2) {
  if (t2 < t1) fail(ErrorKind::InvalidInput, "arc_length: t1 must not exceed t2");
  if (arc.kind == ArcKind::DegeneratePoint) return 0.0;
  if (arc.has_provenance) return (t2 - t1) * arc.params.c();
  return t2 - t1;  // parameter is Euclidean arc length for constructed arcs
}

double arc_length(const ArcDescriptor& arc) {
  switch (arc.kind) {
    case ArcKind::DegeneratePoint:
      return 0.0;
    case ArcKind::LineSegment:
      return dist2d(arc.a, arc.b);
    case ArcKind::CircleArc:
      return std::abs(arc.end_angle - arc.start_angle) * arc.radius;
  }
  return 0.0;
}

ArcDescriptor circle_through(const Point2D& p1, const Point2D& p2, const Point2D& p3) {
  if (dist2d(p1, p2) == 0 || dist2d(p2, p3) == 0 || dist2d(p1, p3) == 0)
    fail(ErrorKind::DuplicatePoints, "circle_through: points must be pairwise distinct");
  const double area2 = (p2.x - p1.x) * (p3.y - p1.y) - (p2.y - p1.y) * (p3.x - p1.x);
  ArcDescriptor arc;
  if (std::abs(0.5 * area2) < 1e-9) {
    // Collinear: line segment spanning the three points.
    arc.kind = ArcKind::LineSegment;
    Point2D dir{p2.x - p1.x, p2.y - p1.y};
    double n = std::hypot(dir.x, dir.y);
    if (n == 0) {
      dir = {p3.x - p1.x, p3.y - p1.y};
      n = std::hypot(dir.x, dir.y);
    }
    dir.x /= n;
    dir.y /= n;
    auto par = [&](const Point2D& q) { return (q.x - p1.x) * dir.x + (q.y - p1.y) * dir.y; };
    const double lo = std::min({par(p1), par(p2), par(p3)});
    const double hi = std::max({par(p1), par(p2), par(p3)});
    arc.a = {p1.x + lo * dir.x, p1.y + lo * dir.y};
    arc.b = {p1.x + hi * dir.x, p1.y + hi * dir.y};
    return arc;
  }
  // Perpendicular bisector intersection.
  const double bx = p2.x - p1.x, by = p2.y - p1.y;
  const double cx = p3.x - p1.x, cy = p3.y - p1.y;
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const double d = 2 * (bx * cy - by * cx);
  arc.kind = ArcKind::CircleArc;
  arc.center = {p1.x + (cy * b2 - by * c2) / d, p1.y + (bx * c2 - cx * b2) / d};
  arc.radius = dist2d(arc.center, p1);
  arc.a = p1;
  arc.b = p2;
  // Arc extent: p1 -> p2 along the side that avoids p3.
  const double a1 = std::atan2(p1.y - arc.center.y, p1.x - arc.center.x);
  const double a2 = std::atan2(p2.y - arc.center.y, p2.x - arc.center.x);
  const double a3 = std::atan2(p3.y - arc.center.y, p3.x - arc.center.x);
  const double ccw_span = positive_span(a2 - a1);
  const double ccw_to_p3 = positive_span(a3 - a1);
  if (ccw_to_p3 < ccw_span) {
    arc.orientation = -1;  // ccw path hits p3 first; go clockwise
    arc.start_angle = a1;
    arc.end_angle = a1 - (kTwoPi - ccw_span);
  } else {
    arc.orientation = +1;
    arc.start_angle = a1;
    arc.end_angle = a1 + ccw_span;
  }
  return arc;
}

GeodesicParams lift_arc_params(const ArcDescriptor& arc, const Point2D& target2d) {
  const Point2D b0 = arc.has_provenance ? fibre_project(arc.base) : arc.a;
  if (arc.kind == ArcKind::DegeneratePoint) {
    if (dist2d(target2d, b0) > 1e-9)
      fail(ErrorKind::TargetNotOnArc, "lift: no lift off the fibre of a degenerate arc");
    if (arc.has_provenance) return arc.params;
    fail(ErrorKind::InvalidInput, "lift: degenerate arc without a generator is underdetermined");
  }
  if (arc.kind == ArcKind::LineSegment) {
    const Point2D d{target2d.x - b0.x, target2d.y - b0.y};
    const double len = std::hypot(d.x, d.y);
    if (len == 0) return {0, 0, 0};
    // residual off the supporting line
    const Point2D dir{arc.b.x - arc.a.x, arc.b.y - arc.a.y};
    const double dn = std::hypot(dir.x, dir.y);
    if (dn > 0) {
      const double off = std::abs(d.x * (dir.y / dn) - d.y * (dir.x / dn));
      if (off > 1e-9) fail(ErrorKind::TargetNotOnArc, "lift: target off the supporting line");
    }
    return {std::atan2(d.y, d.x), 0.0, len};
  }
  // circle arc
  if (std::abs(arc.end_angle - arc.start_angle) >= kTwoPi)
    fail(ErrorKind::OutOfModelRange, "lift: arcs of a full winding or more are ambiguous");
  if (std::abs(dist2d(target2d, arc.center) - arc.radius) > 1e-9)
    fail(ErrorKind::TargetNotOnArc, "lift: target off the arc's circle");
  if (std::abs(dist2d(b0, arc.center) - arc.radius) > 1e-9)
    fail(ErrorKind::InvalidInput, "lift: arc does not pass through its base projection");
  const double theta = arc.orientation * std::atan(1.0 / arc.radius);
  const double c = std::cos(theta);
  // alpha from the traversal tangent at the base point.
  const Point2D rad{b0.x - arc.center.x, b0.y - arc.center.y};
  Point2D tang{-rad.y, rad.x};
  if (arc.orientation < 0) tang = {rad.y, -rad.x};
  const double alpha = std::atan2(tang.y, tang.x);
  const double ang_b = std::atan2(b0.y - arc.center.y, b0.x - arc.center.x);
  const double ang_t = std::atan2(target2d.y - arc.center.y, target2d.x - arc.center.x);
  const double span = positive_span(arc.orientation * (ang_t - ang_b));
  const double t = span * arc.radius / c;
  return {wrap_angle(alpha), theta, t};
}

}  // namespace nil
