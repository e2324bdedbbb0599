#include "nil/triangle.hpp"

#include <algorithm>
#include <cmath>

#include "nil/errors.hpp"

namespace nil {

namespace {

constexpr double kOnLineTol = 1e-6;
constexpr double kBetweenTol = 1e-7;

double collinearity_residual(double dAP, double dPB, double dAB, bool* between) {
  const double r_between = std::abs(dAP + dPB - dAB);
  const double r_beyond_b = std::abs(dAB + dPB - dAP);
  const double r_before_a = std::abs(dAP + dAB - dPB);
  *between = r_between <= std::min(r_beyond_b, r_before_a);
  return std::min({r_between, r_beyond_b, r_before_a});
}

}  // namespace

SimpleRatio simple_ratio(const Point& A, const Point& P, const Point& B) {
  if (euclid_dist(A, P) == 0 || euclid_dist(P, B) == 0 || euclid_dist(A, B) == 0)
    fail(ErrorKind::InvalidInput, "simple ratio needs pairwise distinct points");
  const double dAP = distance(A, P), dPB = distance(P, B), dAB = distance(A, B);
  bool between = false;
  const double res = collinearity_residual(dAP, dPB, dAB, &between);
  if (res > kOnLineTol)
    fail(ErrorKind::NotOnLine, "point is off the geodesic line through the endpoints");
  const bool strictly_between = std::abs(dAP + dPB - dAB) < kBetweenTol;
  SimpleRatio r;
  r.residual = res;
  r.value = strictly_between ? dAP / dPB : -dAP / dPB;
  return r;
}

Point menelaus_point(const Point& Ai, const Point& Aj, const Point& Ak, const Point& P1,
                     const Point& P2, double menelaus_constant) {
  if (!(menelaus_constant < 0))
    fail(ErrorKind::InvalidInput, "the ratio-condition constant must be negative");
  const SimpleRatio s1 = simple_ratio(Aj, P1, Ai);
  const SimpleRatio s2 = simple_ratio(Ai, P2, Ak);
  if (s1.value <= 0 || s2.value <= 0)
    fail(ErrorKind::InvalidInput, "P1 and P2 must be strictly interior to their sides");
  const bool mid1 = std::abs(s1.value - 1) < 1e-9, mid2 = std::abs(s2.value - 1) < 1e-9;
  if (mid1 && mid2)
    fail(ErrorKind::BothMidpoints, "both points are midpoints; the midline case applies");
  const double s3 = menelaus_constant / (s1.value * s2.value);
  if (std::abs(s3 + 1) < 1e-9)
    fail(ErrorKind::OutOfModelRange, "anchor ratio -1: no finite anchor on this side");
  return point_at_ratio(Ak, Aj, s3);
}

// ---------------------------------------------------------------------------
// Side frames: cached projected geometry of the triangle sides
// ---------------------------------------------------------------------------

namespace {

struct SideFrame {
  Point V, W;              // 3D endpoints, geodesic solved from V
  GeodesicParams params;   // V -> W
  double L = 0;            // projected arc length
  bool is_line = false;
  Point2D u{};             // unit tangent at V* (line direction when is_line)
  Point2D center{};        // circle data when !is_line
  double radius = 0;
  double signed_r = 0;     // c/w

  Point2D start() const { return {V.x, V.y}; }

  // Signed arc-length parameter of a base point on the side's carrier
  // (0 at V*, L at W*), principal winding.
  double param(const Point2D& q) const {
    if (is_line) return (q.x - V.x) * u.x + (q.y - V.y) * u.y;
    const double su = (q.x - center.x) / signed_r;
    const double cu = -(q.y - center.y) / signed_r;
    const double ang = std::atan2(su, cu);  // = w t + alpha
    double t = (ang - params.alpha) / params.w();
    const double period = kTwoPi / std::abs(params.w());
    while (t > 0.5 * period) t -= period;
    while (t < -0.5 * period) t += period;
    return t * params.c();
  }

  // s(V, Q, W) from the projected parameter (ratio preservation of the
  // fibre projection).
  double ratio(const Point2D& q) const {
    const double l = param(q);
    return l / (L - l);
  }

  double dist_to_carrier(const Point2D& q) const {
    if (is_line) {
      const double px = q.x - V.x, py = q.y - V.y;
      return std::abs(px * u.y - py * u.x);
    }
    return std::abs(dist2d(q, center) - radius);
  }
};

SideFrame make_side(const Point& V, const Point& W) {
  SideFrame s;
  s.V = V;
  s.W = W;
  s.params = solve_geodesic_fast(V, W).params;
  s.L = s.params.t * s.params.c();
  const double w = s.params.w(), c = s.params.c();
  s.u = {std::cos(s.params.alpha), std::sin(s.params.alpha)};
  if (std::abs(w) < 1e-12) {
    s.is_line = true;
  } else {
    s.signed_r = c / w;
    s.center = {V.x - s.signed_r * std::sin(s.params.alpha),
                V.y + s.signed_r * std::cos(s.params.alpha)};
    s.radius = std::abs(s.signed_r);
  }
  return s;
}

struct TriangleFrame {
  Point A[3];
  // side[i][j]: frame of the geodesic from vertex i to vertex j (i != j)
  SideFrame side[3][3];

  explicit TriangleFrame(const Point& A0, const Point& A1, const Point& A2) {
    A[0] = A0;
    A[1] = A1;
    A[2] = A2;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) side[i][j] = make_side(A[i], A[j]);
  }
  Point2D proj(int i) const { return {A[i].x, A[i].y}; }
};

// --- plain 2D circle helpers -----------------------------------------------

struct Circle {
  Point2D c{};
  double r = 0;
  bool line = false;  // degenerate member: the straight chord
  Point2D p{}, d{};   // line anchor and unit direction when line == true
};

std::vector<Point2D> circle_circle(const Circle& a, const Circle& b) {
  std::vector<Point2D> out;
  if (a.line || b.line) {
    const Circle& L = a.line ? a : b;
    const Circle& C = a.line ? b : a;
    if (L.line && C.line) return out;
    const double ex = C.c.x - L.p.x, ey = C.c.y - L.p.y;
    const double along = ex * L.d.x + ey * L.d.y;
    const double off2 = (ex * ex + ey * ey) - along * along;
    const double h2 = C.r * C.r - off2;
    if (h2 < 0) return out;
    const double h = std::sqrt(h2);
    out.push_back({L.p.x + (along - h) * L.d.x, L.p.y + (along - h) * L.d.y});
    if (h > 0) out.push_back({L.p.x + (along + h) * L.d.x, L.p.y + (along + h) * L.d.y});
    return out;
  }
  const double dx = b.c.x - a.c.x, dy = b.c.y - a.c.y;
  const double d = std::hypot(dx, dy);
  if (d < 1e-15) return out;
  const double l = (a.r * a.r - b.r * b.r + d * d) / (2 * d);
  double h2 = a.r * a.r - l * l;
  if (h2 < -1e-10 * a.r * a.r) return out;
  if (h2 < 0) h2 = 0;  // near-tangent treated as tangency
  const double h = std::sqrt(h2);
  const Point2D m{a.c.x + l * dx / d, a.c.y + l * dy / d};
  out.push_back({m.x - h * dy / d, m.y + h * dx / d});
  if (h > 1e-10 * std::max(1.0, a.r))
    out.push_back({m.x + h * dy / d, m.y - h * dx / d});
  return out;
}

Circle side_carrier(const SideFrame& s) {
  Circle c;
  if (s.is_line) {
    c.line = true;
    c.p = s.start();
    c.d = s.u;
  } else {
    c.c = s.center;
    c.r = s.radius;
  }
  return c;
}

// circle through two points with prescribed signed curvature (0 -> chord line)
Circle pencil_member(const Point2D& p1, const Point2D& p2, double kappa) {
  Circle c;
  const double hx = p2.x - p1.x, hy = p2.y - p1.y;
  const double ch = std::hypot(hx, hy);
  const Point2D n{-hy / ch, hx / ch};
  if (std::abs(kappa) < 1e-12) {
    c.line = true;
    c.p = p1;
    c.d = {hx / ch, hy / ch};
    return c;
  }
  const double r = 1.0 / std::abs(kappa);
  if (r < 0.5 * ch) {
    c.r = -1;  // infeasible
    return c;
  }
  const double b = std::sqrt(r * r - 0.25 * ch * ch) * (kappa > 0 ? 1.0 : -1.0);
  c.c = {0.5 * (p1.x + p2.x) + b * n.x, 0.5 * (p1.y + p2.y) + b * n.y};
  c.r = r;
  return c;
}

// circle through `through` tangent to direction tau at `at`
Circle tangent_circle(const Point2D& at, const Point2D& tau_raw, const Point2D& through) {
  const double tn = std::hypot(tau_raw.x, tau_raw.y);
  const Point2D tau{tau_raw.x / tn, tau_raw.y / tn};
  const Point2D n{-tau.y, tau.x};
  const Point2D d{at.x - through.x, at.y - through.y};
  const double dn = n.x * d.x + n.y * d.y;
  Circle c;
  if (std::abs(dn) < 1e-13 * std::hypot(d.x, d.y)) {
    c.line = true;
    c.p = at;
    c.d = tau;
    return c;
  }
  const double s = -(d.x * d.x + d.y * d.y) / (2 * dn);
  c.c = {at.x + s * n.x, at.y + s * n.y};
  c.r = std::abs(s);
  return c;
}

double dist_to_circle(const Circle& c, const Point2D& q) {
  if (c.line) {
    const double px = q.x - c.p.x, py = q.y - c.p.y;
    return std::abs(px * c.d.y - py * c.d.x);
  }
  return std::abs(dist2d(q, c.c) - c.r);
}

ArcDescriptor arc_between(const Circle& c, const Point2D& from, const Point2D& to,
                          const std::optional<Point2D>& avoid) {
  ArcDescriptor arc;
  if (c.line) {
    arc.kind = ArcKind::LineSegment;
    arc.a = from;
    arc.b = to;
    return arc;
  }
  arc.kind = ArcKind::CircleArc;
  arc.center = c.c;
  arc.radius = c.r;
  arc.a = from;
  arc.b = to;
  const double a1 = std::atan2(from.y - c.c.y, from.x - c.c.x);
  const double a2 = std::atan2(to.y - c.c.y, to.x - c.c.x);
  auto pos = [](double d) {
    d = std::fmod(d, kTwoPi);
    if (d < 0) d += kTwoPi;
    return d;
  };
  double ccw = pos(a2 - a1);
  bool go_ccw = ccw <= kTwoPi - ccw;
  if (avoid) {
    const double a3 = std::atan2(avoid->y - c.c.y, avoid->x - c.c.x);
    go_ccw = pos(a3 - a1) >= ccw;  // ccw path must not pass the avoided point
  }
  arc.orientation = go_ccw ? +1 : -1;
  arc.start_angle = a1;
  arc.end_angle = go_ccw ? a1 + ccw : a1 - (kTwoPi - ccw);
  return arc;
}

Point2D arc_eval(const ArcDescriptor& arc, double f) {  // f in [0,1]
  if (arc.kind == ArcKind::LineSegment)
    return {arc.a.x + f * (arc.b.x - arc.a.x), arc.a.y + f * (arc.b.y - arc.a.y)};
  const double ang = arc.start_angle + f * (arc.end_angle - arc.start_angle);
  return {arc.center.x + arc.radius * std::cos(ang), arc.center.y + arc.radius * std::sin(ang)};
}

// ---------------------------------------------------------------------------
// Point classification against the triangle
// ---------------------------------------------------------------------------

struct PointPlace {
  int vertex = -1;          // coincides with a vertex
  int side_i = -1, side_j = -1;  // strictly interior to side (i,j), i < j
  double side_ratio = 0;    // s(Ai, P, Aj) when on a side
  bool interior = true;
};

PointPlace classify_point(const TriangleFrame& tf, const Point& P) {
  PointPlace pl;
  for (int v = 0; v < 3; ++v)
    if (euclid_dist(P, tf.A[v]) < 1e-10) {
      pl.vertex = v;
      pl.interior = false;
      return pl;
    }
  for (int i = 0; i < 3 && pl.side_i < 0; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double dVP = distance(tf.A[i], P), dPW = distance(P, tf.A[j]);
      const double dVW = tf.side[i][j].params.t;
      if (std::abs(dVP + dPW - dVW) < 1e-8) {
        pl.side_i = i;
        pl.side_j = j;
        pl.side_ratio = dVP / dPW;
        pl.interior = false;
        break;
      }
    }
  return pl;
}

bool on_surface(const TriangleSurface& surf, const Point& P, double tol) {
  if (euclid_dist(P, surf.A0) < tol || euclid_dist(P, surf.A1) < tol ||
      euclid_dist(P, surf.A2) < tol)
    return true;
  const auto [l1, l2] = surface_ratios(surf.A0, surf.A1, surf.A2, P);
  if (!std::isfinite(l1) || !std::isfinite(l2)) return false;
  SurfacePointOptions o;
  o.certify = false;
  o.warm_start = P;
  try {
    const auto r = triangle_surface_point(surf.A0, surf.A1, surf.A2, l1, l2, o);
    return euclid_dist(r.p, P) <= tol * 10;
  } catch (const Error&) {
    return false;
  }
}

// Sample a base-plane arc and lift it through the surface chart.
void sample_line(const TriangleSurface& surf, SurfaceLine& line, const SurfaceLineOptions& opts) {
  line.samples.clear();
  line.gaps.clear();
  const int n = std::max(2, opts.samples);
  const double total = arc_length(line.arc);
  line.samples.push_back(line.p1);
  int misses = 0;
  double gap_start = -1;
  for (int k = 1; k + 1 < n; ++k) {
    const double f = static_cast<double>(k) / (n - 1);
    const Point2D q = arc_eval(line.arc, f);
    try {
      const auto r = surface_point_over(surf, q, opts.membership_tol);
      line.samples.push_back(r.p);
      if (gap_start >= 0) {
        line.gaps.emplace_back(gap_start * total, f * total);
        gap_start = -1;
      }
    } catch (const Error&) {
      ++misses;
      if (gap_start < 0) gap_start = f;
    }
  }
  if (gap_start >= 0) line.gaps.emplace_back(gap_start * total, total);
  line.samples.push_back(line.p2);
  if (misses > opts.max_gap_fraction * n)
    fail(ErrorKind::ArcSurfaceMiss, "most arc samples have no surface point on their fibre");
}

// Anchor-residual selector for the pencil construction: the circle must pass
// through the anchor point demanded by the ratio condition of its own side
// crossings.
struct PencilSelector {
  const TriangleFrame* tf;
  int i, j, k;  // shared vertex i; crossings on sides (i,j), (i,k); anchor on (j,k)
  Point2D p1, p2;
  double constant;

  std::optional<double> operator()(double kappa) const {
    const Circle c = pencil_member(p1, p2, kappa);
    if (!c.line && c.r < 0) return std::nullopt;
    const SideFrame& sij = tf->side[i][j];
    const SideFrame& sik = tf->side[i][k];
    auto in_segment_crossing = [&](const SideFrame& s) -> std::optional<Point2D> {
      std::optional<Point2D> best;
      for (const Point2D& q : circle_circle(c, side_carrier(s))) {
        const double l = s.param(q);
        if (l > 1e-9 && l < s.L - 1e-9) {
          if (best) return std::nullopt;  // two interior crossings: ambiguous
          best = q;
        }
      }
      return best;
    };
    const auto q1 = in_segment_crossing(sij);
    const auto q2 = in_segment_crossing(sik);
    if (!q1 || !q2) return std::nullopt;
    const double s1 = 1.0 / sij.ratio(*q1);  // s(Aj, Q1, Ai)
    const double s2 = sik.ratio(*q2);        // s(Ai, Q2, Ak)
    if (s1 <= 0 || s2 <= 0) return std::nullopt;
    const double s3 = constant / (s1 * s2);  // s(Ak, P3, Aj)
    if (std::abs(s3 + 1) < 1e-12) return std::nullopt;
    Point P3;
    try {
      P3 = point_at_ratio(tf->A[k], tf->A[j], s3);
    } catch (const Error&) {
      return std::nullopt;
    }
    const Point2D p3{P3.x, P3.y};
    const double sd = c.line ? ((p3.x - c.p.x) * c.d.y - (p3.y - c.p.y) * c.d.x)
                             : (dist2d(p3, c.c) - c.r);
    return sd;
  }
};

std::vector<double> scan_roots(const std::function<std::optional<double>(double)>& f, double lo,
                               double hi, int steps) {
  std::vector<double> roots;
  std::optional<double> prev;
  double prev_x = lo;
  for (int s = 0; s <= steps; ++s) {
    const double x = lo + (hi - lo) * s / steps;
    const auto v = f(x);
    if (v && prev && *prev * *v <= 0 && (*prev != 0 || *v != 0)) {
      double a = prev_x, fa = *prev, b = x;
      for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        const auto fm = f(m);
        if (!fm) break;
        if (fa * *fm <= 0)
          b = m;
        else {
          a = m;
          fa = *fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    if (v) {
      prev = v;
      prev_x = x;
    } else {
      prev.reset();
    }
  }
  return roots;
}

// Cevian arc of a vertex-to-foot pair: limit of the anchored construction,
// i.e. the circle through the foot tangent at the vertex to
// L_ij u_ij + delta L_ik u_ik.
Circle cevian_circle(const TriangleFrame& tf, int vertex, double delta, const Point2D& foot) {
  const int j = (vertex + 1) % 3, k = (vertex + 2) % 3;
  const SideFrame& sj = tf.side[vertex][j];
  const SideFrame& sk = tf.side[vertex][k];
  const Point2D tau{sj.L * sj.u.x + delta * sk.L * sk.u.x, sj.L * sj.u.y + delta * sk.L * sk.u.y};
  return tangent_circle(tf.proj(vertex), tau, foot);
}

int third_side_of(int a, int b) { return 3 - a - b; }

// Point lies in the region bounded by the three projected side arcs: it must
// be on the same side of every carrier as the opposite vertex.
bool inside_projected_region(const TriangleFrame& tf, const Point2D& q) {
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const SideFrame& s = tf.side[a][b];
      const Point2D opp = tf.proj(third_side_of(a, b));
      if (s.is_line) {
        const double sq = (q.x - s.V.x) * s.u.y - (q.y - s.V.y) * s.u.x;
        const double sv = (opp.x - s.V.x) * s.u.y - (opp.y - s.V.y) * s.u.x;
        if (sq * sv < 0) return false;
      } else {
        const bool in_q = dist2d(q, s.center) < s.radius;
        const bool in_v = dist2d(opp, s.center) < s.radius;
        if (in_q != in_v) return false;
      }
    }
  return true;
}

}  // namespace

const char* surface_line_case_name(SurfaceLineCase c) {
  switch (c) {
    case SurfaceLineCase::FibreSegment: return "fibre-segment";
    case SurfaceLineCase::SideGeodesic: return "side-geodesic";
    case SurfaceLineCase::ChordArc: return "chord-arc";
    case SurfaceLineCase::Midline: return "midline";
    case SurfaceLineCase::Cevian: return "cevian";
  }
  return "unknown";
}

SurfaceLine surface_line(const TriangleSurface& surf, const Point& P1, const Point& P2,
                         const SurfaceLineOptions& opts) {
  if (euclid_dist(P1, P2) == 0)
    fail(ErrorKind::InvalidInput, "surface line needs two distinct points");
  if (!on_surface(surf, P1, opts.membership_tol) || !on_surface(surf, P2, opts.membership_tol))
    fail(ErrorKind::NotOnSurface, "an endpoint is not on the triangle surface");

  TriangleFrame tf(surf.A0, surf.A1, surf.A2);
  SurfaceLine line;
  line.p1 = P1;
  line.p2 = P2;

  // Case 1: common fibre.
  if (dist2d(fibre_project(P1), fibre_project(P2)) < 1e-10) {
    line.kind = SurfaceLineCase::FibreSegment;
    line.arc.kind = ArcKind::DegeneratePoint;
    line.arc.a = line.arc.b = fibre_project(P1);
    const int n = std::max(2, opts.samples);
    for (int k = 0; k < n; ++k) {
      const double f = static_cast<double>(k) / (n - 1);
      line.samples.push_back({P1.x, P1.y, P1.z + f * (P2.z - P1.z)});
    }
    return line;
  }

  // Both points on one side's geodesic line: the side geodesic itself.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      bool b1, b2;
      const double r1 = collinearity_residual(distance(tf.A[i], P1), distance(P1, tf.A[j]),
                                              tf.side[i][j].params.t, &b1);
      const double r2 = collinearity_residual(distance(tf.A[i], P2), distance(P2, tf.A[j]),
                                              tf.side[i][j].params.t, &b2);
      if (r1 < 1e-8 && r2 < 1e-8) {
        line.kind = SurfaceLineCase::SideGeodesic;
        const GeodesicSolution sol = solve_geodesic_fast(P1, P2);
        GeodesicParams seg = sol.params;
        line.theta_g = seg.theta;
        line.arc = projected_arc(P1, seg);
        const int n = std::max(2, opts.samples);
        for (int s = 0; s < n; ++s) {
          GeodesicParams q = seg;
          q.t = seg.t * s / (n - 1);
          line.samples.push_back(geodesic_point_from(P1, q));
        }
        return line;
      }
    }

  const PointPlace c1 = classify_point(tf, P1);
  const PointPlace c2 = classify_point(tf, P2);

  // Case 2.d: a vertex endpoint.
  if (c1.vertex >= 0 || c2.vertex >= 0) {
    const bool swap = c2.vertex >= 0;
    const Point& Q = swap ? P1 : P2;
    const int vi = swap ? c2.vertex : c1.vertex;
    const PointPlace& cq = swap ? c1 : c2;
    const int oj = (vi + 1) % 3, ok_ = (vi + 2) % 3;
    Circle circ;
    if (cq.side_i >= 0 && third_side_of(cq.side_i, cq.side_j) == vi) {
      // Opposite-side foot: delta = s(A_{v+1}, Q, A_{v+2}).
      const double delta = tf.side[oj][ok_].ratio(fibre_project(Q));
      circ = cevian_circle(tf, vi, delta, fibre_project(Q));
      line.theta_g = 0;
    } else {
      // Interior point: self-consistent member of the pencil through (V*, Q*).
      const Point2D vp = tf.proj(vi), qp = fibre_project(Q);
      const SideFrame& opp = tf.side[oj][ok_];
      auto align = [&](double kappa) -> std::optional<double> {
        const Circle c = pencil_member(vp, qp, kappa);
        if (!c.line && c.r < 0) return std::nullopt;
        std::optional<Point2D> foot;
        for (const Point2D& x : circle_circle(c, side_carrier(opp))) {
          const double l = opp.param(x);
          if (l > 1e-9 && l < opp.L - 1e-9) {
            if (foot) return std::nullopt;
            foot = x;
          }
        }
        if (!foot) return std::nullopt;
        const double delta = opp.ratio(*foot);
        if (delta <= 0) return std::nullopt;
        const SideFrame& sj = tf.side[vi][oj];
        const SideFrame& sk = tf.side[vi][ok_];
        Point2D tau{sj.L * sj.u.x + delta * sk.L * sk.u.x,
                    sj.L * sj.u.y + delta * sk.L * sk.u.y};
        const double tn = std::hypot(tau.x, tau.y);
        tau = {tau.x / tn, tau.y / tn};
        Point2D tg;
        if (c.line) {
          tg = c.d;
        } else {
          const Point2D rad{vp.x - c.c.x, vp.y - c.c.y};
          tg = {-rad.y / c.r, rad.x / c.r};
        }
        if (tg.x * (qp.x - vp.x) + tg.y * (qp.y - vp.y) < 0) tg = {-tg.x, -tg.y};
        return tg.x * tau.y - tg.y * tau.x;
      };
      const double kmax = 2.0 / dist2d(vp, qp);
      auto roots = scan_roots(align, -kmax, kmax, 600);
      if (roots.empty())
        fail(ErrorKind::NoArcIntersection, "no consistent cevian through the vertex and point");
      std::sort(roots.begin(), roots.end(),
                [](double a, double b) { return std::abs(a) < std::abs(b); });
      line.root_multiplicity = roots.size() > 1;
      circ = pencil_member(vp, qp, roots.front());
    }
    line.kind = SurfaceLineCase::Cevian;
    line.arc = arc_between(circ, fibre_project(swap ? P2 : P1), fibre_project(swap ? P1 : P2),
                           std::nullopt);
    if (!circ.line) line.theta_g = std::atan(1.0 / circ.r);
    sample_line(surf, line, opts);
    return line;
  }

  // Case 2.a: interior points of two sides sharing a vertex.
  if (c1.side_i >= 0 && c2.side_i >= 0) {
    int shared = -1;
    const int s1v[2] = {c1.side_i, c1.side_j}, s2v[2] = {c2.side_i, c2.side_j};
    for (int a : s1v)
      for (int b : s2v)
        if (a == b) shared = a;
    if (shared >= 0) {
      const int i = shared;
      const int j = c1.side_i == i ? c1.side_j : c1.side_i;
      const int k = c2.side_i == i ? c2.side_j : c2.side_i;
      if (j == k) fail(ErrorKind::InvalidInput, "points on one side must be handled as that side");
      const double s1 = 1.0 / tf.side[i][j].ratio(fibre_project(P1));  // s(Aj,P1,Ai)
      const double s2 = tf.side[i][k].ratio(fibre_project(P2));        // s(Ai,P2,Ak)
      const bool mids = std::abs(s1 - 1) < 1e-9 && std::abs(s2 - 1) < 1e-9;
      if (mids) {
        // Case 2.b: the connecting curve inherits theta from the third side.
        const SideFrame& third = tf.side[j][k];
        line.kind = SurfaceLineCase::Midline;
        line.theta_g = third.params.theta;
        const double r = std::abs(third.signed_r);
        const Point2D a = fibre_project(P1), b = fibre_project(P2);
        const double half = 0.5 * dist2d(a, b);
        if (third.is_line || r < half)
          fail(ErrorKind::NoArcIntersection, "midline radius infeasible for this pair");
        const Point2D mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
        Point2D n{-(b.y - a.y), b.x - a.x};
        const double nn = std::hypot(n.x, n.y);
        n = {n.x / nn, n.y / nn};
        const double off = std::sqrt(r * r - half * half);
        // Bulge on the same side of the chord as the third side's own bulge.
        const Point2D tm{0.5 * (tf.proj(j).x + tf.proj(k).x), 0.5 * (tf.proj(j).y + tf.proj(k).y)};
        const double side_sign = (third.center.x - tm.x) * n.x + (third.center.y - tm.y) * n.y;
        const double sgn = side_sign >= 0 ? 1.0 : -1.0;
        Circle c;
        c.c = {mid.x + sgn * off * n.x, mid.y + sgn * off * n.y};
        c.r = r;
        line.arc = arc_between(c, a, b, std::nullopt);
        sample_line(surf, line, opts);
        return line;
      }
      const Point P3 = menelaus_point(tf.A[i], tf.A[j], tf.A[k], P1, P2, opts.menelaus_constant);
      line.kind = SurfaceLineCase::ChordArc;
      const ArcDescriptor arc3 =
          circle_through(fibre_project(P1), fibre_project(P2), fibre_project(P3));
      line.arc = arc3;
      if (arc3.kind == ArcKind::CircleArc) {
        Circle c;
        c.c = arc3.center;
        c.r = arc3.radius;
        line.arc = arc_between(c, fibre_project(P1), fibre_project(P2),
                               std::optional<Point2D>(fibre_project(P3)));
        line.theta_g = std::atan(1.0 / arc3.radius);
      }
      sample_line(surf, line, opts);
      return line;
    }
  }

  // Case 2.c: at least one interior point. The connecting circle is the
  // pencil member through the two projections whose own side crossings
  // satisfy the ratio condition. All three anchor-side assignments are
  // scanned; the side first hit by the extended projected chord is preferred.
  {
    const Point2D p1 = fibre_project(P1), p2 = fibre_project(P2);
    Circle chord;
    chord.line = true;
    chord.p = p1;
    const double chn = dist2d(p1, p2);
    chord.d = {(p2.x - p1.x) / chn, (p2.y - p1.y) / chn};
    int preferred_j = -1, preferred_k = -1;
    double best_beyond = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        for (const Point2D& q : circle_circle(chord, side_carrier(tf.side[a][b]))) {
          const double s = (q.x - p1.x) * chord.d.x + (q.y - p1.y) * chord.d.y;
          const double beyond =
              s > chn ? s - chn : (s < 0 ? -s : std::numeric_limits<double>::infinity());
          if (beyond < best_beyond) {
            best_beyond = beyond;
            preferred_j = a;
            preferred_k = b;
          }
        }
      }

    struct Candidate {
      double kappa;
      int j, k;
      Point2D anchor;
      bool preferred;
    };
    std::vector<Candidate> cands;
    const double kmax = 1.9 / dist2d(p1, p2);
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const int i = third_side_of(a, b);
        PencilSelector sel{&tf, i, a, b, p1, p2, opts.menelaus_constant};
        for (double root : scan_roots([&](double x) { return sel(x); }, -kmax, kmax, 700)) {
          const Circle c = pencil_member(p1, p2, root);
          // recover the anchor for validation and branch selection
          const SideFrame& sij = tf.side[i][a];
          const SideFrame& sik = tf.side[i][b];
          std::optional<Point2D> q1, q2;
          for (const Point2D& q : circle_circle(c, side_carrier(sij))) {
            const double l = sij.param(q);
            if (l > 1e-9 && l < sij.L - 1e-9) q1 = q;
          }
          for (const Point2D& q : circle_circle(c, side_carrier(sik))) {
            const double l = sik.param(q);
            if (l > 1e-9 && l < sik.L - 1e-9) q2 = q;
          }
          if (!q1 || !q2) continue;
          const double s1 = 1.0 / sij.ratio(*q1), s2 = sik.ratio(*q2);
          const double s3 = opts.menelaus_constant / (s1 * s2);
          if (std::abs(s3 + 1) < 1e-12) continue;
          Point2D anchor;
          try {
            anchor = fibre_project(point_at_ratio(tf.A[b], tf.A[a], s3));
          } catch (const Error&) {
            continue;
          }
          // the arc between the endpoints (away from the anchor) must stay
          // inside the projected triangle region
          const ArcDescriptor trial = arc_between(c, p1, p2, anchor);
          const Point2D mid = arc_eval(trial, 0.5);
          if (!inside_projected_region(tf, mid)) continue;
          cands.push_back({root, a, b, anchor, a == preferred_j && b == preferred_k});
        }
      }
    if (cands.empty())
      fail(ErrorKind::NoArcIntersection, "no pencil member satisfies the ratio condition");
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.preferred != b.preferred) return a.preferred;
      return std::abs(a.kappa) < std::abs(b.kappa);
    });
    // distinct surviving circles -> multiplicity flag
    for (std::size_t i = 1; i < cands.size(); ++i)
      if (std::abs(cands[i].kappa - cands[0].kappa) > 1e-8) line.root_multiplicity = true;
    const Candidate& chosen = cands.front();
    const Circle c = pencil_member(p1, p2, chosen.kappa);
    line.kind = SurfaceLineCase::ChordArc;
    line.arc = arc_between(c, p1, p2, std::optional<Point2D>(chosen.anchor));
    if (!c.line) line.theta_g = std::atan(1.0 / c.r);
    sample_line(surf, line, opts);
    return line;
  }
}

CevaConfig ceva_config(const Point& A0, const Point& A1, const Point& A2, double delta1,
                       double delta2, const CevaOptions& opts) {
  if (!(delta1 > 0) || !(delta2 > 0))
    fail(ErrorKind::InvalidInput, "feet ratios must be strictly positive");
  CevaConfig cfg;
  cfg.A0 = A0;
  cfg.A1 = A1;
  cfg.A2 = A2;
  cfg.delta1 = delta1;
  cfg.delta2 = delta2;
  cfg.delta3 = 1.0 / (delta1 * delta2);
  cfg.type = classify_triangle(A0, A1, A2);
  cfg.P12 = point_at_ratio(A1, A2, delta1);
  cfg.P02 = point_at_ratio(A2, A0, delta2);
  cfg.P01 = point_at_ratio(A0, A1, cfg.delta3);

  TriangleFrame tf(A0, A1, A2);
  const Circle K0 = cevian_circle(tf, 0, delta1, fibre_project(cfg.P12));
  const Circle K1 = cevian_circle(tf, 1, delta2, fibre_project(cfg.P02));
  const Circle K2 = cevian_circle(tf, 2, cfg.delta3, fibre_project(cfg.P01));

  const auto pts = circle_circle(K0, K1);
  if (pts.empty())
    fail(ErrorKind::NoArcIntersection, "projected cevian arcs do not meet");
  const Point2D centroid{(A0.x + A1.x + A2.x) / 3, (A0.y + A1.y + A2.y) / 3};
  Point2D best = pts.front();
  for (const Point2D& q : pts)
    if (dist2d(q, centroid) < dist2d(best, centroid)) best = q;
  if (pts.size() > 1) {
    const double hull = std::max({dist2d(centroid, tf.proj(0)), dist2d(centroid, tf.proj(1)),
                                  dist2d(centroid, tf.proj(2))});
    int inside = 0;
    for (const Point2D& q : pts)
      if (dist2d(q, centroid) <= hull) ++inside;
    cfg.intersection_multiplicity = inside > 1;
  }
  cfg.T_star = best;

  cfg.third_cevian_miss = dist_to_circle(K2, cfg.T_star);
  cfg.third_cevian_flag = cfg.third_cevian_miss > opts.third_miss_flag;
  const double diam = std::max({distance(A0, A1), distance(A1, A2), distance(A0, A2)});
  if (cfg.third_cevian_miss > opts.third_miss_abort * diam)
    fail(ErrorKind::ThirdCevianMiss, "third cevian arc misses the intersection point badly");

  // Re-measured ratio products.
  cfg.sn_product = simple_ratio(A0, cfg.P01, A1).value * simple_ratio(A1, cfg.P12, A2).value *
                   simple_ratio(A2, cfg.P02, A0).value;
  if (cfg.type == TriangleType::GeneralType) {
    cfg.sc_product = tf.side[0][1].ratio(fibre_project(cfg.P01)) *
                     tf.side[1][2].ratio(fibre_project(cfg.P12)) *
                     tf.side[2][0].ratio(fibre_project(cfg.P02));
  }

  const TriangleSurface* surf = opts.surface;
  TriangleSurface local;
  if ((opts.lift_t || opts.build_lines) && surf == nullptr) {
    SurfacePointOptions so;
    so.certify = false;
    local = triangle_surface_mesh(A0, A1, A2, 8, so);
    surf = &local;
  }
  if (opts.lift_t) {
    try {
      cfg.T = surface_point_over(*surf, cfg.T_star).p;
    } catch (const Error&) {
      cfg.T.reset();
    }
  }
  if (opts.build_lines) {
    SurfaceLineOptions lo;
    lo.samples = opts.line_samples;
    const Circle* Ks[3] = {&K0, &K1, &K2};
    const Point* feet[3] = {&cfg.P12, &cfg.P02, &cfg.P01};
    const Point* verts[3] = {&A0, &A1, &A2};
    for (int i = 0; i < 3; ++i) {
      SurfaceLine line;
      line.p1 = *verts[i];
      line.p2 = *feet[i];
      line.kind = SurfaceLineCase::Cevian;
      line.arc = arc_between(*Ks[i], fibre_project(*verts[i]), fibre_project(*feet[i]),
                             std::nullopt);
      if (!Ks[i]->line) line.theta_g = std::atan(1.0 / Ks[i]->r);
      try {
        sample_line(*surf, line, lo);
      } catch (const Error&) {
        // keep endpoints; gaps already recorded
      }
      cfg.lines.push_back(std::move(line));
    }
  }
  return cfg;
}

double ceva_product(const CevaConfig& c) {
  return simple_ratio(c.A0, c.P01, c.A1).value * simple_ratio(c.A1, c.P12, c.A2).value *
         simple_ratio(c.A2, c.P02, c.A0).value;
}

double ceva_product_projected(const CevaConfig& c) {
  if (c.type == TriangleType::FibreType)
    fail(ErrorKind::DegenerateProjection, "projected triangle collapses for fibre type");
  TriangleFrame tf(c.A0, c.A1, c.A2);
  return tf.side[0][1].ratio(fibre_project(c.P01)) * tf.side[1][2].ratio(fibre_project(c.P12)) *
         tf.side[2][0].ratio(fibre_project(c.P02));
}

}  // namespace nil
