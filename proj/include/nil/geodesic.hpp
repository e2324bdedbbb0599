#pragma once

#include <vector>

#include "nil/core.hpp"

namespace nil {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2 * kPi;

// Direction angles and arc length of a unit-speed geodesic from its base:
// initial velocity (c cos(alpha), c sin(alpha), w) with c = cos(theta),
// w = sin(theta).
struct GeodesicParams {
  double alpha = 0;  // [-pi, pi)
  double theta = 0;  // [-pi/2, pi/2]
  double t = 0;      // arc length >= 0

  double c() const { return std::cos(theta); }
  double w() const { return std::sin(theta); }
};

double wrap_angle(double a);  // into [-pi, pi)

/// Closed-form geodesic point from the origin. Helix form for 0 < |w| < 1,
/// the parabolic w = 0 form and the fibre case |w| = 1 are its exact limits
/// (series-stabilised below |w*t| = 1e-4).
Point geodesic_point(const GeodesicParams& params);

/// Coordinate velocity of the geodesic at its parameter t (origin frame).
Vec3 geodesic_velocity(const GeodesicParams& params);

/// Geodesic from an arbitrary base point: translate of the origin curve.
Point geodesic_point_from(const Point& base, const GeodesicParams& params);
Vec3 geodesic_velocity_from(const Point& base, const GeodesicParams& params);

/// Test oracle: RK4 integration of the geodesic equations derived from the
/// metric's Christoffel symbols, from the same initial conditions, up to
/// params.t. Integrates at `step` and `step/2` and fails with NoConvergence
/// if the endpoints differ by more than 1e-6.
Point geodesic_ode_oracle(const GeodesicParams& params, double step);

struct SolverOptions {
  double tol = 1e-9;          // Euclidean endpoint residual in model coordinates
  int alpha_seeds = 16;
  int theta_seeds = 17;
  double fd_step = 1e-7;      // finite-difference Jacobian step
  int max_iters = 60;
  double dedupe_tol = 1e-6;   // in (alpha, theta, t)
  bool multistart = true;     // false: reduction path only (with Newton polish)
};

struct GeodesicSolution {
  GeodesicParams params;      // minimal-t solution
  Point base;
  double residual = 0;
  int branch_count = 0;       // distinct solutions with t <= 2*pi
  bool ambiguous_beyond_injectivity = false;
  bool beyond_model_range = false;  // minimal t exceeds 2*pi
  std::vector<GeodesicParams> branches;
};

/// Two-point geodesic problem. Translates the target into the origin frame
/// and refines a seed grid over (alpha, theta) with damped Newton on the
/// 3-residual; solutions deduplicated and ordered by (t, |theta|, alpha).
/// Also seeds from the rotational reduction of the endpoint map, which is
/// exact off the fibre axis.
GeodesicSolution solve_geodesic(const Point& base, const Point& target,
                                const SolverOptions& opts = {});

/// Reduction-only solve (no seed grid). Fast path used by field sampling.
GeodesicSolution solve_geodesic_fast(const Point& base, const Point& target,
                                     double tol = 1e-9);

/// Arc length of the minimizing geodesic; 0 for coincident points.
double distance(const Point& p, const Point& q);

/// Point P on the geodesic line through A and B with signed simple ratio
/// d(A,P)/d(P,B) = s (negative s places P outside the segment). s != -1.
Point point_at_ratio(const Point& A, const Point& B, double s);

// Stable primitives shared with the sphere meridian formulas.
double sinc_half(double u);     // sin(u/2)/(u/2)
double sublinear_s(double u);   // (u - sin u)/u^3
double versine_c2(double u);    // (1 - cos u)/u^2

}  // namespace nil
