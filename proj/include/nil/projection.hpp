#pragma once

#include "nil/geodesic.hpp"

namespace nil {

struct Point2D {
  double x = 0, y = 0;
};

inline double dist2d(const Point2D& a, const Point2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

enum class ArcKind { CircleArc, LineSegment, DegeneratePoint };

// Base-plane image of a geodesic segment: a circle arc for 0 < |w| < 1, a
// line segment for w = 0, a single point for |w| = 1. Positive theta
// traverses its circle counterclockwise.
struct ArcDescriptor {
  ArcKind kind = ArcKind::LineSegment;

  // circle-arc fields
  Point2D center{};
  double radius = 0;              // |cot theta| of the generator
  double start_angle = 0;         // angle of the start point about center
  double end_angle = 0;           // unwrapped: end = start + orientation*|span|
  int orientation = +1;           // +1 ccw, -1 cw

  Point2D a{}, b{};               // endpoints (all kinds; equal for degenerate)

  bool has_provenance = false;    // generating geodesic, when known
  Point base{};
  GeodesicParams params{};
};

/// Projection parallel to the fibre direction onto the base plane.
inline Point2D fibre_project(const Point& p) { return {p.x, p.y}; }

/// Base-plane image of the geodesic segment t in [0, params.t] from `base`.
ArcDescriptor projected_arc(const Point& base, const GeodesicParams& params);

/// Point of the arc at generator parameter t (provenance arcs only).
Point2D arc_point(const ArcDescriptor& arc, double t);

/// Euclidean length of the sub-arc between generator parameters t1 <= t2.
/// Equals (t2 - t1) * cos(theta) for provenance arcs. For arcs without
/// provenance the parameter is Euclidean arc length from endpoint `a`.
double arc_length(const ArcDescriptor& arc, double t1, double t2);

/// Full length of the descriptor's extent.
double arc_length(const ArcDescriptor& arc);

/// Circle (perpendicular-bisector construction) or line through three
/// pairwise distinct points; collinear inputs (signed area below 1e-9)
/// yield a line-segment descriptor spanning them.
ArcDescriptor circle_through(const Point2D& p1, const Point2D& p2, const Point2D& p3);

/// Reconstruct the unique geodesic from arc.base whose projection is the
/// given arc portion ending at target2d: radius fixes |theta|, orientation
/// its sign, the base tangent fixes alpha, arc length / cos(theta) fixes t.
/// Rejects targets off the arc's circle and windings of a full turn or more.
GeodesicParams lift_arc_params(const ArcDescriptor& arc, const Point2D& target2d);

}  // namespace nil
