#include "nil/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include "nil/errors.hpp"

namespace nil {

double wrap_angle(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a - kPi;
}

double sinc_half(double u) {
  const double h = 0.5 * u;
  if (std::abs(h) < 1e-4) {
    const double h2 = h * h;
    return 1.0 - h2 / 6.0 + h2 * h2 / 120.0;
  }
  return std::sin(h) / h;
}

double sublinear_s(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 / 6.0 - u2 / 120.0 + u2 * u2 / 5040.0;
  }
  return (u - std::sin(u)) / (u * u * u);
}

double versine_c2(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 0.5 - u2 / 24.0 + u2 * u2 / 720.0;
  }
  return (1.0 - std::cos(u)) / (u * u);
}

Point geodesic_point(const GeodesicParams& p) {
  const double c = p.c(), w = p.w(), t = p.t;
  if (std::abs(c) < 1e-16) return {0, 0, w * t};  // fibre geodesic
  const double u = w * t;
  const double half = 0.5 * u;
  const double radial = c * t * sinc_half(u);
  const double x = radial * std::cos(half + p.alpha);
  const double y = radial * std::sin(half + p.alpha);
  const double z =
      w * t + 0.5 * c * c * t * t * (u * sublinear_s(u) + versine_c2(u) * std::sin(u + 2 * p.alpha));
  return {x, y, z};
}

Vec3 geodesic_velocity(const GeodesicParams& p) {
  const double c = p.c(), w = p.w(), t = p.t;
  if (std::abs(c) < 1e-16) return {0, 0, w};
  const double u = w * t + p.alpha;
  const double vx = c * std::cos(u);
  const double vy = c * std::sin(u);
  const Point pos = geodesic_point(p);
  return {vx, vy, w + pos.x * vy};
}

Point geodesic_point_from(const Point& base, const GeodesicParams& params) {
  return translate(geodesic_point(params), as_translation(base));
}

Vec3 geodesic_velocity_from(const Point& base, const GeodesicParams& params) {
  return translate_differential(as_translation(base), geodesic_velocity(params));
}

namespace {

struct OdeState {
  double x, y, z, vx, vy, vz;
};

OdeState ode_rhs(const OdeState& s) {
  // Geodesic equations from the metric's Christoffel symbols:
  //   x'' = x y'^2 - y' z',  y'' = -x x' y' + x' z',  z'' = (1-x^2) x' y' + x x' z'
  OdeState d;
  d.x = s.vx;
  d.y = s.vy;
  d.z = s.vz;
  d.vx = s.x * s.vy * s.vy - s.vy * s.vz;
  d.vy = -s.x * s.vx * s.vy + s.vx * s.vz;
  d.vz = (1 - s.x * s.x) * s.vx * s.vy + s.x * s.vx * s.vz;
  return d;
}

OdeState ode_step(const OdeState& s, double h) {
  auto add = [](const OdeState& a, const OdeState& b, double f) {
    return OdeState{a.x + f * b.x,   a.y + f * b.y,   a.z + f * b.z,
                    a.vx + f * b.vx, a.vy + f * b.vy, a.vz + f * b.vz};
  };
  const OdeState k1 = ode_rhs(s);
  const OdeState k2 = ode_rhs(add(s, k1, 0.5 * h));
  const OdeState k3 = ode_rhs(add(s, k2, 0.5 * h));
  const OdeState k4 = ode_rhs(add(s, k3, h));
  OdeState o = s;
  o.x += h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
  o.y += h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
  o.z += h / 6 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z);
  o.vx += h / 6 * (k1.vx + 2 * k2.vx + 2 * k3.vx + k4.vx);
  o.vy += h / 6 * (k1.vy + 2 * k2.vy + 2 * k3.vy + k4.vy);
  o.vz += h / 6 * (k1.vz + 2 * k2.vz + 2 * k3.vz + k4.vz);
  return o;
}

Point ode_integrate(const GeodesicParams& p, double step) {
  const int n = std::max(1, static_cast<int>(std::ceil(p.t / step)));
  const double h = p.t / n;
  OdeState s{0, 0, 0, p.c() * std::cos(p.alpha), p.c() * std::sin(p.alpha), p.w()};
  for (int i = 0; i < n; ++i) s = ode_step(s, h);
  return {s.x, s.y, s.z};
}

}  // namespace

Point geodesic_ode_oracle(const GeodesicParams& params, double step) {
  if (step <= 0) fail(ErrorKind::InvalidInput, "ode oracle: step must be positive");
  if (params.t == 0) return {0, 0, 0};
  const Point coarse = ode_integrate(params, step);
  const Point fine = ode_integrate(params, 0.5 * step);
  if (euclid_dist(coarse, fine) > 1e-6)
    fail(ErrorKind::NoConvergence, "ode oracle: halving the step moved the endpoint by > 1e-6");
  return fine;
}

namespace {

// g(u) = (u - sin u)/(1 - cos u), strictly increasing on (0, 2*pi).
double ratio_g(double u) { return u * sublinear_s(u) / versine_c2(u); }

double ratio_g_prime(double u) {
  if (std::abs(u) < 1e-3) return 1.0 / 3.0 + u * u / 30.0;
  const double s = std::sin(u), c = std::cos(u);
  const double d = 1 - c;
  return (d * d - (u - s) * s) / (d * d);
}

struct ReducedSolution {
  GeodesicParams params;
  bool ok = false;
};

// Endpoint map reduction: rotating the meridian-plane endpoint
// (X(t,theta), 0, Z(t,theta)) about the fibre axis through angle
// ang = alpha + w*t/2 lands at (X cos ang, X sin ang, Z + X^2 sin(2 ang)/4).
// Hence rho and z - rho^2 sin(2 phi)/4 determine (theta, t) through the
// strictly monotone F below, and alpha = phi - u/2.
ReducedSolution solve_reduced(const Point& target) {
  ReducedSolution out;
  const double rho = std::hypot(target.x, target.y);
  const double scale = 1.0 + std::abs(target.z) + rho;
  if (rho < 1e-15 * scale) {
    // On the fibre axis.
    out.params.alpha = 0;
    out.params.theta = target.z >= 0 ? 0.5 * kPi : -0.5 * kPi;
    out.params.t = std::abs(target.z);
    out.ok = true;
    return out;
  }
  const double phi = std::atan2(target.y, target.x);
  const double z_merid = target.z - 0.25 * rho * rho * std::sin(2 * phi);
  if (std::abs(z_merid) < 1e-15 * scale) {
    out.params = {wrap_angle(phi), 0.0, rho};
    out.ok = true;
    return out;
  }
  const bool mirrored = z_merid < 0;
  const double zt = std::abs(z_merid);
  const double q = 0.25 * rho * rho;
  auto F = [&](double u) { return u + q * ratio_g(u) - zt; };
  double lo = 1e-12, hi = kTwoPi - 1e-12;
  if (F(hi) < 0) return out;  // beyond one winding: no solution in range
  // Safeguarded Newton.
  double u = std::min(hi, std::max(lo, zt / (1 + q / 3)));
  for (int it = 0; it < 200; ++it) {
    const double f = F(u);
    if (f > 0)
      hi = u;
    else
      lo = u;
    const double df = 1 + q * ratio_g_prime(u);
    double un = u - f / df;
    if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
    if (std::abs(un - u) < 1e-16 * (1 + u)) {
      u = un;
      break;
    }
    u = un;
  }
  const double m = rho / (u * sinc_half(u));  // = cot(theta) on the w>0 branch
  const double w = 1.0 / std::sqrt(1.0 + m * m);
  double theta = std::asin(w);
  double t = u / w;
  double alpha;
  if (!mirrored) {
    alpha = phi - 0.5 * u;
  } else {
    // Solve for the reflected target (-x, y, -z) and map back through the
    // line reflection (alpha -> pi - alpha, theta -> -theta).
    const double phi2 = std::atan2(target.y, -target.x);
    alpha = kPi - (phi2 - 0.5 * u);
    theta = -theta;
  }
  out.params = {wrap_angle(alpha), theta, t};
  out.ok = true;
  return out;
}

// One damped Newton pass on the full 3-residual (finite-difference Jacobian).
// Returns the achieved residual.
double newton_polish(GeodesicParams& p, const Point& target, double fd_step, int max_iters,
                     double tol) {
  auto residual = [&](const GeodesicParams& q, double r[3]) {
    const Point e = geodesic_point(q);
    r[0] = e.x - target.x;
    r[1] = e.y - target.y;
    r[2] = e.z - target.z;
    return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  };
  double r[3];
  double best = residual(p, r);
  for (int it = 0; it < max_iters && best > tol; ++it) {
    double J[3][3];
    const double vars[3] = {p.alpha, p.theta, p.t};
    for (int j = 0; j < 3; ++j) {
      GeodesicParams q = p;
      double* field = j == 0 ? &q.alpha : (j == 1 ? &q.theta : &q.t);
      *field = vars[j] + fd_step;
      double rj[3];
      residual(q, rj);
      J[0][j] = (rj[0] - r[0]) / fd_step;
      J[1][j] = (rj[1] - r[1]) / fd_step;
      J[2][j] = (rj[2] - r[2]) / fd_step;
    }
    // Solve J * step = r by Cramer.
    const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                       J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                       J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
    if (std::abs(det) < 1e-300) break;
    auto solve_col = [&](int col) {
      double M[3][3];
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) M[a][b] = J[a][b];
      for (int a = 0; a < 3; ++a) M[a][col] = r[a];
      return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
              M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
              M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) /
             det;
    };
    const double da = solve_col(0), dth = solve_col(1), dt = solve_col(2);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h < 20; ++h) {
      GeodesicParams q;
      q.alpha = wrap_angle(p.alpha - lambda * da);
      q.theta = std::clamp(p.theta - lambda * dth, -0.5 * kPi, 0.5 * kPi);
      q.t = std::max(0.0, p.t - lambda * dt);
      double rq[3];
      const double rn = residual(q, rq);
      if (rn < best * (1 - 1e-4 * lambda)) {
        p = q;
        best = rn;
        r[0] = rq[0];
        r[1] = rq[1];
        r[2] = rq[2];
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }
  return best;
}

bool near_axis(const Point& t) {
  return std::hypot(t.x, t.y) < 1e-12 * (1 + std::abs(t.z));
}

}  // namespace

GeodesicSolution solve_geodesic_fast(const Point& base, const Point& target, double tol) {
  GeodesicSolution sol;
  sol.base = base;
  const Point rel = translate(target, translation_to_origin(base));
  if (euclid_dist(rel, {0, 0, 0}) == 0)
    fail(ErrorKind::InvalidInput, "solve_geodesic: target equals base");
  ReducedSolution red = solve_reduced(rel);
  if (!red.ok) fail(ErrorKind::NoConvergence, "geodesic solve: target beyond one winding");
  GeodesicParams p = red.params;
  double res = euclid_dist(geodesic_point(p), rel);
  if (res > 1e-13) res = newton_polish(p, rel, 1e-7, 8, 1e-14);
  if (res > tol) fail(ErrorKind::NoConvergence, "geodesic solve: residual above tolerance");
  sol.params = p;
  sol.residual = res;
  sol.branch_count = 1;
  sol.beyond_model_range = p.t > kTwoPi + 1e-12;
  sol.branches = {p};
  return sol;
}

GeodesicSolution solve_geodesic(const Point& base, const Point& target, const SolverOptions& opts) {
  GeodesicSolution sol;
  sol.base = base;
  const Point rel = translate(target, translation_to_origin(base));
  if (euclid_dist(rel, {0, 0, 0}) == 0)
    fail(ErrorKind::InvalidInput, "solve_geodesic: target equals base");

  std::vector<GeodesicParams> found;
  auto record = [&](GeodesicParams p, double res) {
    if (res > opts.tol) return;
    if (near_axis(rel)) {  // canonical fibre representative
      p.alpha = 0;
      p.theta = rel.z >= 0 ? 0.5 * kPi : -0.5 * kPi;
      p.t = std::abs(rel.z);
    }
    for (const auto& q : found) {
      const double d = std::abs(wrap_angle(p.alpha - q.alpha)) + std::abs(p.theta - q.theta) +
                       std::abs(p.t - q.t);
      if (d < opts.dedupe_tol) return;
    }
    found.push_back(p);
  };

  // Reduction seed (exact off the axis).
  ReducedSolution red = solve_reduced(rel);
  if (red.ok) {
    GeodesicParams p = red.params;
    const double res = newton_polish(p, rel, opts.fd_step, 10, 1e-14);
    record(p, res);
  }

  if (opts.multistart || found.empty()) {
    const double rho = std::hypot(rel.x, rel.y);
    const double t0 = std::max(1e-3, std::hypot(rho, rel.z));
    const double pole_gap = 1e-3;
    for (int j = 0; j < opts.theta_seeds; ++j) {
      const double theta = -(0.5 * kPi - pole_gap) +
                           j * (kPi - 2 * pole_gap) / (opts.theta_seeds - 1);
      for (int i = 0; i < opts.alpha_seeds; ++i) {
        const double alpha = -kPi + (i + 0.5) * kTwoPi / opts.alpha_seeds;
        GeodesicParams p{alpha, theta, t0};
        const double res = newton_polish(p, rel, opts.fd_step, opts.max_iters, opts.tol * 1e-3);
        record(p, res);
      }
    }
  }

  if (found.empty()) fail(ErrorKind::NoConvergence, "solve_geodesic: no seed refined below tolerance");

  std::sort(found.begin(), found.end(), [](const GeodesicParams& a, const GeodesicParams& b) {
    if (a.t != b.t) return a.t < b.t;
    if (std::abs(a.theta) != std::abs(b.theta)) return std::abs(a.theta) < std::abs(b.theta);
    return a.alpha < b.alpha;
  });

  sol.branches = found;
  sol.params = found.front();
  sol.residual = euclid_dist(geodesic_point(sol.params), rel);
  int in_range = 0;
  for (const auto& p : found)
    if (p.t <= kTwoPi + 1e-12) ++in_range;
  sol.branch_count = in_range > 0 ? in_range : static_cast<int>(found.size());
  sol.ambiguous_beyond_injectivity = in_range > 1;
  sol.beyond_model_range = sol.params.t > kTwoPi + 1e-12;
  return sol;
}

double distance(const Point& p, const Point& q) {
  if (p.x == q.x && p.y == q.y && p.z == q.z) return 0.0;
  return solve_geodesic_fast(p, q).params.t;
}

Point point_at_ratio(const Point& A, const Point& B, double s) {
  if (std::abs(s + 1.0) < 1e-12)
    fail(ErrorKind::InvalidInput, "point_at_ratio: ratio -1 has no finite realization");
  if (A.x == B.x && A.y == B.y && A.z == B.z)
    fail(ErrorKind::InvalidInput, "point_at_ratio: endpoints coincide");
  const GeodesicSolution sol = solve_geodesic_fast(A, B);
  const double t_p = s / (1 + s) * sol.params.t;
  if (std::abs(t_p) > kTwoPi)
    fail(ErrorKind::OutOfModelRange, "point_at_ratio: extension beyond the 2*pi range");
  if (t_p >= 0) {
    GeodesicParams p = sol.params;
    p.t = t_p;
    return geodesic_point_from(A, p);
  }
  // Extension behind A: traverse the reversed geodesic, keeping t positive.
  GeodesicParams p;
  p.alpha = wrap_angle(sol.params.alpha + kPi);
  p.theta = -sol.params.theta;
  p.t = -t_p;
  return geodesic_point_from(A, p);
}

}  // namespace nil
