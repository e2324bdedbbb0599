#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nil/parallel.hpp"
#include "nil/projection.hpp"

namespace nil {

// ---------------------------------------------------------------------------
// Geodesic spheres
// ---------------------------------------------------------------------------

// Sphere of radius R about `center`; spheres exist (embedded) only for
// R in (0, 2*pi].
struct SphereSpec {
  Point center;
  double R;
  SphereSpec(const Point& c, double radius);
};

/// Meridian of the origin-centred sphere in the [x,z] plane:
/// X = (2c/w) sin(wR/2), Z = wR + c^2 R/(2w) - c^2 sin(wR)/(2w^2),
/// with (X, Z) = (R, 0) at theta = 0.
std::pair<double, double> sphere_cross_section(double R, double theta);

/// Meridian point rotated about the fibre axis through alpha, translated to
/// the sphere's center.
Point sphere_point(const SphereSpec& spec, double theta, double alpha);

struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<double, 2>> vertex_params;  // optional tags

  int euler_characteristic() const;
};

/// Structured (theta, alpha) mesh with collapsed poles. n_theta, n_alpha >= 3.
Mesh sphere_mesh(const SphereSpec& spec, int n_theta, int n_alpha,
                 const ParallelOptions& par = {});

// ---------------------------------------------------------------------------
// Apollonius surfaces
// ---------------------------------------------------------------------------

struct ApolloniusSpec {
  Point p1, p2;
  double lambda = 1.0;
  bool lambda_infinite = false;
  ApolloniusSpec(const Point& a, const Point& b, double l, bool inf_flag = false);
};

/// d(P1,Q) - lambda * d(Q,P2); zero exactly on the surface. For the infinite
/// flag the field is d(Q,P2), vanishing only at P2.
double apollonius_field(const ApolloniusSpec& spec, const Point& q);

struct Box {
  Point lo, hi;
  double diagonal() const { return euclid_dist(lo, hi); }
};

/// Zero level set of the field on a regular lattice over the box, extracted
/// per lattice cell (six-tetrahedra split, edge interpolation refined until
/// |field| < 1e-4 * box diagonal at every emitted vertex).
Mesh apollonius_sample(const ApolloniusSpec& spec, const Box& box, int resolution,
                       const ParallelOptions& par = {});

// ---------------------------------------------------------------------------
// Triangle surfaces
// ---------------------------------------------------------------------------

enum class TriangleType { FibreType, GeneralType };

/// Fibre type iff the three base-plane projections are collinear within
/// 1e-12 (a vertical plane through the vertices exists).
TriangleType classify_triangle(const Point& A0, const Point& A1, const Point& A2);

struct SurfacePointOptions {
  double constraint_tol = 1e-6;
  int restarts = 24;              // perturbed restarts certifying minimality
  double restart_agreement = 1e-4;
  double ambiguity_pos = 1e-3;    // restarts further apart than this ...
  double ambiguity_obj = 1e-6;    // ... while this close in objective: flag
  unsigned seed = 12345;
  bool certify = true;            // false: single warm-started solve
  std::optional<Point> warm_start;
};

struct SurfacePointResult {
  Point p;
  double c1 = 0, c2 = 0;          // constraint residuals
  bool ambiguous = false;
};

/// Point of the triangle surface at ratio parameters (l1, l2): the point of
/// {d(A0,.) = l1 d(.,A1)} meet {d(A2,.) = l2 d(.,A0)} minimizing d(.,A0).
/// l1 = 0 returns A0 and l2 = 0 returns A2 exactly.
SurfacePointResult triangle_surface_point(const Point& A0, const Point& A1, const Point& A2,
                                          double l1, double l2,
                                          const SurfacePointOptions& opts = {});

struct TriangleSurface {
  Point A0, A1, A2;
  TriangleType type;
  int n = 0;  // grid steps per direction (u = k/n, k = 0..n), u = 1 is the limit row
  struct Node {
    Point p;
    double l1 = 0, l2 = 0;
    bool ok = false;
    bool ambiguous = false;
  };
  std::vector<Node> grid;  // (n+1) x (n+1), row-major in (i1, i2)

  const Node& node(int i1, int i2) const { return grid[i1 * (n + 1) + i2]; }
  Node& node(int i1, int i2) { return grid[i1 * (n + 1) + i2]; }
  std::vector<std::array<int, 2>> holes;  // failed samples (marked, not fatal)
};

/// Sample the surface on the compactified grid lambda = tan(u*pi/2),
/// u = k/n (k < n), plus the limit rows, and triangulate adjacent samples.
/// Point-level failures are recorded as holes.
TriangleSurface triangle_surface_mesh(const Point& A0, const Point& A1, const Point& A2, int n,
                                      const SurfacePointOptions& opts = {},
                                      const ParallelOptions& par = {});

/// Triangulation of the sampled grid (degenerate cells skipped).
Mesh surface_to_mesh(const TriangleSurface& surface);

/// Surface point over a base-plane point: bisection on the sampled chart
/// along the fibre, refined by the constrained solver. Fails with
/// ArcSurfaceMiss when no chart cell covers the base point.
SurfacePointResult surface_point_over(const TriangleSurface& surface, const Point2D& base,
                                      double tol = 1e-6);

/// Ratio coordinates of a surface candidate point.
std::pair<double, double> surface_ratios(const Point& A0, const Point& A1, const Point& A2,
                                         const Point& q);

}  // namespace nil
