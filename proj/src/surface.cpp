#include "nil/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "nil/errors.hpp"
#include "nil/rng.hpp"

namespace nil {

// ---------------------------------------------------------------------------
// Spheres
// ---------------------------------------------------------------------------

SphereSpec::SphereSpec(const Point& c, double radius) : center(c), R(radius) {
  if (!(radius > 0) || radius > kTwoPi)
    fail(ErrorKind::RadiusBound, "sphere radius must lie in (0, 2*pi]");
}

std::pair<double, double> sphere_cross_section(double R, double theta) {
  if (!(R > 0) || R > kTwoPi) fail(ErrorKind::RadiusBound, "radius must lie in (0, 2*pi]");
  if (theta < -0.5 * kPi - 1e-12 || theta > 0.5 * kPi + 1e-12)
    fail(ErrorKind::InvalidInput, "theta outside [-pi/2, pi/2]");
  const double c = std::cos(theta), w = std::sin(theta);
  if (std::abs(c) < 1e-16) return {0.0, w * R};
  const double u = w * R;
  const double X = c * R * sinc_half(u);
  const double Z = w * R + 0.5 * c * c * R * R * u * sublinear_s(u);
  return {X, Z};
}

Point sphere_point(const SphereSpec& spec, double theta, double alpha) {
  const auto [X, Z] = sphere_cross_section(spec.R, theta);
  const Point meridian{X, 0.0, Z};
  return translate(rotate_about_z(meridian, alpha), as_translation(spec.center));
}

int Mesh::euler_characteristic() const {
  std::unordered_set<std::uint64_t> edges;
  edges.reserve(triangles.size() * 3);
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      const std::uint64_t i = static_cast<std::uint64_t>(std::min(t[e], t[(e + 1) % 3]));
      const std::uint64_t j = static_cast<std::uint64_t>(std::max(t[e], t[(e + 1) % 3]));
      edges.insert((i << 32) | j);
    }
  }
  return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(triangles.size());
}

namespace {

double tri_area(const Point& a, const Point& b, const Point& c) {
  const double ux = b.x - a.x, uy = b.y - a.y, uz = b.z - a.z;
  const double vx = c.x - a.x, vy = c.y - a.y, vz = c.z - a.z;
  const double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

void push_triangle(Mesh& mesh, int i, int j, int k) {
  if (i == j || j == k || i == k) return;
  if (tri_area(mesh.vertices[i], mesh.vertices[j], mesh.vertices[k]) <= 1e-14) return;
  mesh.triangles.push_back({i, j, k});
}

}  // namespace

Mesh sphere_mesh(const SphereSpec& spec, int n_theta, int n_alpha, const ParallelOptions& par) {
  if (n_theta < 3 || n_alpha < 3)
    fail(ErrorKind::InvalidResolution, "sphere mesh needs resolutions >= 3");
  Mesh mesh;
  const int rings = n_theta - 1;  // interior theta rings
  mesh.vertices.resize(2 + static_cast<std::size_t>(rings) * n_alpha);
  mesh.vertex_params.resize(mesh.vertices.size());
  mesh.vertices[0] = sphere_point(spec, -0.5 * kPi, 0.0);  // south pole
  mesh.vertex_params[0] = {-0.5 * kPi, 0.0};
  mesh.vertices[1] = sphere_point(spec, 0.5 * kPi, 0.0);  // north pole
  mesh.vertex_params[1] = {0.5 * kPi, 0.0};
  parallel_for(static_cast<std::int64_t>(rings) * n_alpha, par, [&](std::int64_t idx) {
    const int i = static_cast<int>(idx / n_alpha);  // ring
    const int j = static_cast<int>(idx % n_alpha);
    const double theta = -0.5 * kPi + (i + 1) * kPi / n_theta;
    const double alpha = -kPi + j * kTwoPi / n_alpha;
    mesh.vertices[2 + idx] = sphere_point(spec, theta, alpha);
    mesh.vertex_params[2 + idx] = {theta, alpha};
  });
  auto ring_vertex = [&](int i, int j) { return 2 + i * n_alpha + (j % n_alpha); };
  for (int j = 0; j < n_alpha; ++j) {  // pole fans
    push_triangle(mesh, 0, ring_vertex(0, j + 1), ring_vertex(0, j));
    push_triangle(mesh, 1, ring_vertex(rings - 1, j), ring_vertex(rings - 1, j + 1));
  }
  for (int i = 0; i + 1 < rings; ++i) {
    for (int j = 0; j < n_alpha; ++j) {
      const int a = ring_vertex(i, j), b = ring_vertex(i, j + 1);
      const int c = ring_vertex(i + 1, j), d = ring_vertex(i + 1, j + 1);
      push_triangle(mesh, a, b, d);
      push_triangle(mesh, a, d, c);
    }
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// Apollonius
// ---------------------------------------------------------------------------

ApolloniusSpec::ApolloniusSpec(const Point& a, const Point& b, double l, bool inf_flag)
    : p1(a), p2(b), lambda(l), lambda_infinite(inf_flag) {
  if (euclid_dist(a, b) == 0) fail(ErrorKind::DuplicatePoints, "foci must be distinct");
  if (!inf_flag && !(l >= 0 && std::isfinite(l)))
    fail(ErrorKind::InvalidInput, "lambda must be finite and >= 0 (or flagged infinite)");
}

double apollonius_field(const ApolloniusSpec& spec, const Point& q) {
  if (spec.lambda_infinite) return distance(q, spec.p2);
  return distance(spec.p1, q) - spec.lambda * distance(q, spec.p2);
}

namespace {

// Corner order of the Kuhn split: six tetrahedra sharing the main diagonal
// c0-c7; face diagonals agree between neighbouring cells.
constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7},
                             {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};

struct LatticeField {
  const ApolloniusSpec* spec;
  Box box;
  int res;
  std::vector<double> values;  // (res+1)^3

  std::int64_t id(int i, int j, int k) const {
    return (static_cast<std::int64_t>(i) * (res + 1) + j) * (res + 1) + k;
  }
  Point point(double i, double j, double k) const {
    return {box.lo.x + (box.hi.x - box.lo.x) * i / res, box.lo.y + (box.hi.y - box.lo.y) * j / res,
            box.lo.z + (box.hi.z - box.lo.z) * k / res};
  }
};

}  // namespace

Mesh apollonius_sample(const ApolloniusSpec& spec, const Box& box, int resolution,
                       const ParallelOptions& par) {
  if (resolution < 2) fail(ErrorKind::InvalidResolution, "lattice resolution must be >= 2");
  LatticeField f{&spec, box, resolution, {}};
  const int n = resolution + 1;
  f.values.resize(static_cast<std::size_t>(n) * n * n);
  parallel_for(static_cast<std::int64_t>(n) * n * n, par, [&](std::int64_t idx) {
    const int i = static_cast<int>(idx / (n * n));
    const int j = static_cast<int>((idx / n) % n);
    const int k = static_cast<int>(idx % n);
    f.values[idx] = apollonius_field(spec, f.point(i, j, k));
  });

  bool has_pos = false, has_neg = false;
  for (double v : f.values) {
    has_pos |= v > 0;
    has_neg |= v < 0;
  }
  if (!(has_pos && has_neg))
    fail(ErrorKind::EmptySurface, "no sign change of the ratio field inside the box");

  // Contract: |field| < 1e-4 * diagonal at every vertex. The refinement target
  // tightens with the lattice so vertex quality improves under refinement.
  const double vertex_tol = 1e-4 * box.diagonal() * std::min(0.5, 30.0 / resolution);
  Mesh mesh;
  std::unordered_map<std::uint64_t, int> edge_vertex;  // lattice edge -> mesh vertex

  auto corner_of = [&](int ci, int cj, int ck, int corner) {
    return std::array<int, 3>{ci + ((corner >> 2) & 1), cj + ((corner >> 1) & 1),
                              ck + (corner & 1)};
  };
  auto vertex_on_edge = [&](const std::array<int, 3>& a, const std::array<int, 3>& b) {
    const std::int64_t ia = f.id(a[0], a[1], a[2]), ib = f.id(b[0], b[1], b[2]);
    const std::uint64_t key = ia < ib
                                  ? (static_cast<std::uint64_t>(ia) << 24 | static_cast<std::uint64_t>(ib))
                                  : (static_cast<std::uint64_t>(ib) << 24 | static_cast<std::uint64_t>(ia));
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    double fa = f.values[ia], fb = f.values[ib];
    double ta = 0.0, tb = 1.0;
    double t = fa / (fa - fb);
    Point pa = f.point(a[0], a[1], a[2]), pb = f.point(b[0], b[1], b[2]);
    auto lerp = [&](double s) {
      return Point{pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y), pa.z + s * (pb.z - pa.z)};
    };
    Point p = lerp(t);
    double fv = apollonius_field(spec, p);
    for (int it2 = 0; it2 < 48 && std::abs(fv) > vertex_tol; ++it2) {  // secant with sign bracket
      if ((fv > 0) == (fa > 0)) {
        ta = t;
        fa = fv;
      } else {
        tb = t;
        fb = fv;
      }
      t = (fa == fb) ? 0.5 * (ta + tb) : std::clamp(ta + (tb - ta) * fa / (fa - fb), ta, tb);
      if (t <= ta || t >= tb) t = 0.5 * (ta + tb);
      p = lerp(t);
      fv = apollonius_field(spec, p);
    }
    const int vid = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(p);
    mesh.vertex_params.push_back({0.0, 0.0});
    edge_vertex.emplace(key, vid);
    return vid;
  };

  for (int ci = 0; ci < resolution; ++ci)
    for (int cj = 0; cj < resolution; ++cj)
      for (int ck = 0; ck < resolution; ++ck) {
        double cv[8];
        for (int c = 0; c < 8; ++c) {
          const auto cc = corner_of(ci, cj, ck, c);
          cv[c] = f.values[f.id(cc[0], cc[1], cc[2])];
        }
        for (const auto& tet : kTets) {
          int neg[4], pos[4], nn = 0, np = 0;
          for (int v = 0; v < 4; ++v) {
            if (cv[tet[v]] < 0)
              neg[nn++] = tet[v];
            else
              pos[np++] = tet[v];
          }
          if (nn == 0 || np == 0) continue;
          auto V = [&](int cneg, int cpos) {
            return vertex_on_edge(corner_of(ci, cj, ck, cneg), corner_of(ci, cj, ck, cpos));
          };
          if (nn == 1) {
            push_triangle(mesh, V(neg[0], pos[0]), V(neg[0], pos[1]), V(neg[0], pos[2]));
          } else if (nn == 3) {
            push_triangle(mesh, V(neg[0], pos[0]), V(neg[1], pos[0]), V(neg[2], pos[0]));
          } else {  // 2-2: quad split into two triangles
            const int v00 = V(neg[0], pos[0]), v01 = V(neg[0], pos[1]);
            const int v10 = V(neg[1], pos[0]), v11 = V(neg[1], pos[1]);
            push_triangle(mesh, v00, v01, v11);
            push_triangle(mesh, v00, v11, v10);
          }
        }
      }
  if (mesh.triangles.empty())
    fail(ErrorKind::EmptySurface, "level set produced no geometry at this resolution");
  return mesh;
}

// ---------------------------------------------------------------------------
// Triangle surfaces
// ---------------------------------------------------------------------------

TriangleType classify_triangle(const Point& A0, const Point& A1, const Point& A2) {
  if (euclid_dist(A0, A1) == 0 || euclid_dist(A1, A2) == 0 || euclid_dist(A0, A2) == 0)
    fail(ErrorKind::DuplicatePoints, "triangle vertices must be distinct");
  const double area2 = (A1.x - A0.x) * (A2.y - A0.y) - (A1.y - A0.y) * (A2.x - A0.x);
  return std::abs(0.5 * area2) < 1e-12 ? TriangleType::FibreType : TriangleType::GeneralType;
}

std::pair<double, double> surface_ratios(const Point& A0, const Point& A1, const Point& A2,
                                         const Point& q) {
  const double d0 = distance(A0, q), d1 = distance(q, A1), d2 = distance(A2, q);
  const double l1 = d1 > 0 ? d0 / d1 : std::numeric_limits<double>::infinity();
  const double l2 = d0 > 0 ? d2 / d0 : std::numeric_limits<double>::infinity();
  return {l1, l2};
}

namespace {

struct TrianglePre {
  double diam;
};

TrianglePre check_triangle(const Point& A0, const Point& A1, const Point& A2) {
  const double d01 = distance(A0, A1), d12 = distance(A1, A2), d02 = distance(A0, A2);
  const double diam = std::max({d01, d12, d02});
  // Containment in a radius-pi ball, probed at the vertices and side midpoints.
  const Point candidates[] = {A0,
                              A1,
                              A2,
                              point_at_ratio(A0, A1, 1.0),
                              point_at_ratio(A1, A2, 1.0),
                              point_at_ratio(A0, A2, 1.0),
                              {(A0.x + A1.x + A2.x) / 3, (A0.y + A1.y + A2.y) / 3,
                               (A0.z + A1.z + A2.z) / 3}};
  for (const Point& c : candidates) {
    const double r = std::max({distance(c, A0), distance(c, A1), distance(c, A2)});
    if (r <= kPi) return {diam};
  }
  fail(ErrorKind::OutOfModelRange, "triangle does not fit a ball of radius pi");
}

// Distance evaluations memoized on a quantized key; exploration only, the
// projection and all reported values re-evaluate exactly.
class QuantizedDistanceCache {
 public:
  explicit QuantizedDistanceCache(const Point& to) : to_(to) {}
  double operator()(const Point& q) {
    const std::int64_t kx = llround(q.x * 1e4), ky = llround(q.y * 1e4), kz = llround(q.z * 1e4);
    const std::uint64_t key = (static_cast<std::uint64_t>(kx & 0x1FFFFF) << 42) |
                              (static_cast<std::uint64_t>(ky & 0x1FFFFF) << 21) |
                              static_cast<std::uint64_t>(kz & 0x1FFFFF);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double d = distance(q, to_);
    cache_.emplace(key, d);
    return d;
  }

 private:
  Point to_;
  std::unordered_map<std::uint64_t, double> cache_;
};

struct ConstraintEval {
  const Point *A0, *A1, *A2;
  double l1, l2;

  void exact(const Point& q, double& c1, double& c2) const {
    const double d0 = distance(*A0, q);
    c1 = d0 - l1 * distance(q, *A1);
    c2 = distance(*A2, q) - l2 * d0;
  }
  double objective(const Point& q) const { return distance(q, *A0); }
};

// Nelder-Mead on a 3D penalized objective.
Point nelder_mead(const std::function<double(const Point&)>& f, Point start, double scale,
                  int max_iter) {
  std::array<Point, 4> simplex;
  std::array<double, 4> val;
  simplex[0] = start;
  simplex[1] = {start.x + scale, start.y, start.z};
  simplex[2] = {start.x, start.y + scale, start.z};
  simplex[3] = {start.x, start.y, start.z + scale};
  for (int i = 0; i < 4; ++i) val[i] = f(simplex[i]);
  auto order = [&] {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (val[j] < val[i]) {
          std::swap(val[i], val[j]);
          std::swap(simplex[i], simplex[j]);
        }
  };
  order();
  for (int it = 0; it < max_iter; ++it) {
    const Point& worst = simplex[3];
    Point centroid{(simplex[0].x + simplex[1].x + simplex[2].x) / 3,
                   (simplex[0].y + simplex[1].y + simplex[2].y) / 3,
                   (simplex[0].z + simplex[1].z + simplex[2].z) / 3};
    auto along = [&](double fct) {
      return Point{centroid.x + fct * (centroid.x - worst.x), centroid.y + fct * (centroid.y - worst.y),
                   centroid.z + fct * (centroid.z - worst.z)};
    };
    const Point refl = along(1.0);
    const double fr = f(refl);
    if (fr < val[0]) {
      const Point exp_ = along(2.0);
      const double fe = f(exp_);
      if (fe < fr) {
        simplex[3] = exp_;
        val[3] = fe;
      } else {
        simplex[3] = refl;
        val[3] = fr;
      }
    } else if (fr < val[2]) {
      simplex[3] = refl;
      val[3] = fr;
    } else {
      const Point con = along(-0.5);
      const double fc = f(con);
      if (fc < val[3]) {
        simplex[3] = con;
        val[3] = fc;
      } else {
        for (int i = 1; i < 4; ++i) {
          simplex[i] = {0.5 * (simplex[i].x + simplex[0].x), 0.5 * (simplex[i].y + simplex[0].y),
                        0.5 * (simplex[i].z + simplex[0].z)};
          val[i] = f(simplex[i]);
        }
      }
    }
    order();
    const double spread = euclid_dist(simplex[0], simplex[3]);
    if (spread < 1e-11 && std::abs(val[3] - val[0]) < 1e-15 * (1 + std::abs(val[0]))) break;
  }
  return simplex[0];
}

// Gauss-Newton projection onto the two constraints (minimum-norm steps).
bool project_constraints(const ConstraintEval& ce, Point& q, double tol) {
  for (int it = 0; it < 40; ++it) {
    double c1, c2;
    ce.exact(q, c1, c2);
    if (std::abs(c1) < 0.2 * tol && std::abs(c2) < 0.2 * tol) return true;
    const double h = 1e-7;
    double j11, j12, j13, j21, j22, j23;
    {
      double a, b;
      ce.exact({q.x + h, q.y, q.z}, a, b);
      j11 = (a - c1) / h;
      j21 = (b - c2) / h;
      ce.exact({q.x, q.y + h, q.z}, a, b);
      j12 = (a - c1) / h;
      j22 = (b - c2) / h;
      ce.exact({q.x, q.y, q.z + h}, a, b);
      j13 = (a - c1) / h;
      j23 = (b - c2) / h;
    }
    // step = J^T (J J^T)^-1 c
    const double a11 = j11 * j11 + j12 * j12 + j13 * j13;
    const double a12 = j11 * j21 + j12 * j22 + j13 * j23;
    const double a22 = j21 * j21 + j22 * j22 + j23 * j23;
    const double det = a11 * a22 - a12 * a12;
    if (std::abs(det) < 1e-30) return false;
    const double m1 = (a22 * c1 - a12 * c2) / det;
    const double m2 = (a11 * c2 - a12 * c1) / det;
    q.x -= j11 * m1 + j21 * m2;
    q.y -= j12 * m1 + j22 * m2;
    q.z -= j13 * m1 + j23 * m2;
  }
  double c1, c2;
  ce.exact(q, c1, c2);
  return std::abs(c1) < tol && std::abs(c2) < tol;
}

struct LocalSolveResult {
  Point q;
  double obj;
  bool feasible;
};

// Descend the objective along the feasible curve (1-dof tangent = cross
// product of the two constraint gradients), re-projecting after each step.
// The penalty phase alone cannot localize the minimum along the curve: the
// transverse penalty terms dominate the tiny tangential objective variation.
void tangential_polish(const ConstraintEval& ce, Point& q, double tol) {
  const double h = 1e-6;
  for (int it = 0; it < 60; ++it) {
    double c10, c20;
    ce.exact(q, c10, c20);
    double g1[3], g2[3];
    {
      double a, b;
      ce.exact({q.x + h, q.y, q.z}, a, b);
      g1[0] = (a - c10) / h;
      g2[0] = (b - c20) / h;
      ce.exact({q.x, q.y + h, q.z}, a, b);
      g1[1] = (a - c10) / h;
      g2[1] = (b - c20) / h;
      ce.exact({q.x, q.y, q.z + h}, a, b);
      g1[2] = (a - c10) / h;
      g2[2] = (b - c20) / h;
    }
    Vec3 u{g1[1] * g2[2] - g1[2] * g2[1], g1[2] * g2[0] - g1[0] * g2[2],
           g1[0] * g2[1] - g1[1] * g2[0]};
    const double un = std::sqrt(u.x * u.x + u.y * u.y + u.z * u.z);
    if (un < 1e-12) return;
    u = {u.x / un, u.y / un, u.z / un};
    auto feval = [&](double s) {
      Point p{q.x + s * u.x, q.y + s * u.y, q.z + s * u.z};
      project_constraints(ce, p, tol);
      return ce.objective(p);
    };
    const double hs = 1e-4;
    const double f0 = ce.objective(q), fp = feval(hs), fm = feval(-hs);
    const double slope = (fp - fm) / (2 * hs);
    const double curv = (fp - 2 * f0 + fm) / (hs * hs);
    double step;
    if (curv > 1e-9)
      step = -slope / curv;
    else
      step = (slope > 0 ? -1.0 : 1.0) * 1e-3;
    step = std::clamp(step, -0.05, 0.05);
    Point trial{q.x + step * u.x, q.y + step * u.y, q.z + step * u.z};
    if (!project_constraints(ce, trial, tol)) return;
    if (ce.objective(trial) <= f0) {
      q = trial;
    } else {
      // half steps until improvement or give up
      bool ok = false;
      for (int bh = 0; bh < 12; ++bh) {
        step *= 0.5;
        trial = {q.x + step * u.x, q.y + step * u.y, q.z + step * u.z};
        if (project_constraints(ce, trial, tol) && ce.objective(trial) < f0) {
          q = trial;
          ok = true;
          break;
        }
      }
      if (!ok) return;
    }
    if (std::abs(step) < 1e-10) return;
  }
}

LocalSolveResult local_solve(const ConstraintEval& ce, Point seed, double diam, double tol,
                             bool full_continuation) {
  QuantizedDistanceCache d0(*ce.A0), d1(*ce.A1), d2(*ce.A2);
  auto penalized = [&](double mu) {
    return [&, mu](const Point& q) {
      // exploration may wander outside the solvable range; treat that as a wall
      try {
        const double f0 = d0(q), f1 = d1(q), f2 = d2(q);
        const double c1 = f0 - ce.l1 * f1;
        const double c2 = f2 - ce.l2 * f0;
        return f0 * f0 + mu * (c1 * c1 + c2 * c2);
      } catch (const Error&) {
        return 1e30;
      }
    };
  };
  LocalSolveResult r;
  r.q = seed;
  r.obj = std::numeric_limits<double>::infinity();
  r.feasible = false;
  try {
    Point q = seed;
    const double mus_full[] = {1e2, 1e3, 1e4, 1e5, 1e6};
    const double mus_warm[] = {1e5, 1e6};
    const double* mus = full_continuation ? mus_full : mus_warm;
    const int n_mu = full_continuation ? 5 : 2;
    double scale = full_continuation ? 0.2 * diam : 2e-3 * diam;
    for (int i = 0; i < n_mu; ++i) {
      q = nelder_mead(penalized(mus[i]), q, scale, full_continuation ? 220 : 120);
      scale *= 0.35;
    }
    r.q = q;
    r.feasible = project_constraints(ce, r.q, tol);
    if (r.feasible) tangential_polish(ce, r.q, tol);
    r.obj = ce.objective(r.q);
  } catch (const Error&) {
    r.feasible = false;
  }
  return r;
}

}  // namespace

SurfacePointResult triangle_surface_point(const Point& A0, const Point& A1, const Point& A2,
                                          double l1, double l2, const SurfacePointOptions& opts) {
  if (!(l1 >= 0) || !(l2 >= 0) || (l1 == 0 && l2 == 0))
    fail(ErrorKind::InvalidInput, "need l1, l2 >= 0 with l1^2 + l2^2 > 0");
  const TrianglePre pre = check_triangle(A0, A1, A2);
  if (l1 == 0) return {A0, 0, 0, false};
  if (l2 == 0) return {A2, 0, 0, false};

  ConstraintEval ce{&A0, &A1, &A2, l1, l2};

  // Structured cold seeds: ratio-guided points on the sides plus the centroid.
  std::vector<Point> cold_seeds;
  {
    const Point s1 = point_at_ratio(A0, A1, l1);
    const Point s2 = point_at_ratio(A2, A0, l2);
    cold_seeds.push_back({0.5 * (s1.x + s2.x), 0.5 * (s1.y + s2.y), 0.5 * (s1.z + s2.z)});
    cold_seeds.push_back(s1);
    cold_seeds.push_back(s2);
    cold_seeds.push_back(
        {(A0.x + A1.x + A2.x) / 3, (A0.y + A1.y + A2.y) / 3, (A0.z + A1.z + A2.z) / 3});
  }

  std::vector<LocalSolveResult> good;
  LocalSolveResult best{{}, std::numeric_limits<double>::infinity(), false};
  auto consider = [&](const LocalSolveResult& r) {
    if (!r.feasible) return;
    good.push_back(r);
    if (r.obj < best.obj) best = r;
  };
  const bool warm_only = opts.warm_start.has_value() && !opts.certify;
  if (opts.warm_start)
    consider(local_solve(ce, *opts.warm_start, pre.diam, opts.constraint_tol, false));
  if (!warm_only || good.empty()) {
    for (const Point& s : cold_seeds)
      consider(local_solve(ce, s, pre.diam, opts.constraint_tol, true));
  }
  if (good.empty())
    fail(ErrorKind::EmptyIntersection, "ratio constraints infeasible at tolerance");

  bool ambiguous = false;
  if (opts.certify) {
    Rng rng(opts.seed ^ (static_cast<std::uint64_t>(llround(l1 * 1e6)) << 20) ^
            static_cast<std::uint64_t>(llround(l2 * 1e6)));
    for (int k = 0; k < opts.restarts; ++k) {
      const double sigma = 0.25 * pre.diam * (k % 3 == 2 ? 1.0 : 0.3);
      Point s{best.q.x + sigma * (rng.unit() - 0.5), best.q.y + sigma * (rng.unit() - 0.5),
              best.q.z + sigma * (rng.unit() - 0.5)};
      consider(local_solve(ce, s, pre.diam, opts.constraint_tol, false));
    }
    for (const auto& r : good) {
      if (r.obj < best.obj) best = r;
    }
    for (const auto& r : good) {
      if (r.obj <= best.obj + opts.ambiguity_obj &&
          euclid_dist(r.q, best.q) > opts.ambiguity_pos) {
        ambiguous = true;
        // keep the lexicographically smallest coordinate triple
        if (std::tie(r.q.x, r.q.y, r.q.z) < std::tie(best.q.x, best.q.y, best.q.z)) best = r;
      }
    }
  }

  SurfacePointResult out;
  out.p = best.q;
  ce.exact(out.p, out.c1, out.c2);
  out.ambiguous = ambiguous;
  if (std::abs(out.c1) > opts.constraint_tol || std::abs(out.c2) > opts.constraint_tol)
    fail(ErrorKind::EmptyIntersection, "constraints unsatisfied after projection");
  return out;
}

TriangleSurface triangle_surface_mesh(const Point& A0, const Point& A1, const Point& A2, int n,
                                      const SurfacePointOptions& opts, const ParallelOptions& par) {
  if (n < 4) fail(ErrorKind::InvalidResolution, "triangle surface grid needs n >= 4");
  check_triangle(A0, A1, A2);
  TriangleSurface s;
  s.A0 = A0;
  s.A1 = A1;
  s.A2 = A2;
  s.type = classify_triangle(A0, A1, A2);
  s.n = n;
  s.grid.resize(static_cast<std::size_t>(n + 1) * (n + 1));
  auto lam = [&](int i) { return std::tan(0.5 * kPi * i / n); };

  for (int i1 = 0; i1 <= n; ++i1)
    for (int i2 = 0; i2 <= n; ++i2) {
      auto& node = s.node(i1, i2);
      node.l1 = lam(i1);
      node.l2 = lam(i2);
    }
  // Pinned rows: lambda1 = 0 -> A0; lambda2 = 0 -> A2; limit rows
  // lambda1 = inf -> A1 (taking precedence at the far corner), lambda2 = inf -> A0.
  for (int i2 = 0; i2 <= n; ++i2) {
    s.node(0, i2) = {A0, 0, lam(i2), true, false};
    s.node(n, i2) = {A1, std::numeric_limits<double>::infinity(), lam(i2), true, false};
  }
  for (int i1 = 1; i1 < n; ++i1) {
    s.node(i1, 0) = {A2, lam(i1), 0, true, false};
    s.node(i1, n) = {A0, lam(i1), std::numeric_limits<double>::infinity(), true, false};
  }

  for (int i2 = 1; i2 < n; ++i2) {
    parallel_for(n - 1, par, [&](std::int64_t idx) {
      const int i1 = static_cast<int>(idx) + 1;
      auto& node = s.node(i1, i2);
      SurfacePointOptions o = opts;
      const auto& below = s.node(i1, i2 - 1);
      if (below.ok && i2 > 1) o.warm_start = below.p;
      try {
        const auto r = triangle_surface_point(A0, A1, A2, node.l1, node.l2, o);
        node.p = r.p;
        node.ok = true;
        node.ambiguous = r.ambiguous;
      } catch (const Error&) {
        node.ok = false;
      }
    });
  }
  for (int i1 = 0; i1 <= n; ++i1)
    for (int i2 = 0; i2 <= n; ++i2)
      if (!s.node(i1, i2).ok) s.holes.push_back({i1, i2});
  return s;
}

Mesh surface_to_mesh(const TriangleSurface& s) {
  Mesh mesh;
  const int n = s.n;
  std::vector<int> vid(static_cast<std::size_t>(n + 1) * (n + 1), -1);
  for (int i1 = 0; i1 <= n; ++i1)
    for (int i2 = 0; i2 <= n; ++i2) {
      const auto& node = s.node(i1, i2);
      if (!node.ok) continue;
      vid[i1 * (n + 1) + i2] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(node.p);
      mesh.vertex_params.push_back({static_cast<double>(i1) / n, static_cast<double>(i2) / n});
    }
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const int a = vid[i1 * (n + 1) + i2], b = vid[(i1 + 1) * (n + 1) + i2];
      const int c = vid[(i1 + 1) * (n + 1) + i2 + 1], d = vid[i1 * (n + 1) + i2 + 1];
      if (a < 0 || b < 0 || c < 0 || d < 0) continue;
      push_triangle(mesh, a, b, c);
      push_triangle(mesh, a, c, d);
    }
  return mesh;
}

namespace {

// Slope of d(., A0) along the tangent of the constraint curve through the
// fibre point (base, z). Zero exactly where the fibre meets the surface
// (stationarity of the defining minimum); the sampled chart only brackets z.
double fibre_stationarity(const TriangleSurface& s, const Point2D& base, double z) {
  const Point q{base.x, base.y, z};
  const double dA0 = distance(s.A0, q);
  const double dA1 = distance(q, s.A1);
  if (dA0 < 1e-12 || dA1 < 1e-12) return 0;
  const double l1 = dA0 / dA1;
  const double l2 = distance(s.A2, q) / dA0;
  ConstraintEval ce{&s.A0, &s.A1, &s.A2, l1, l2};
  const double h = 1e-6;
  double c10, c20;
  ce.exact(q, c10, c20);
  double g1[3], g2[3];
  double a, b;
  ce.exact({q.x + h, q.y, q.z}, a, b);
  g1[0] = (a - c10) / h;
  g2[0] = (b - c20) / h;
  ce.exact({q.x, q.y + h, q.z}, a, b);
  g1[1] = (a - c10) / h;
  g2[1] = (b - c20) / h;
  ce.exact({q.x, q.y, q.z + h}, a, b);
  g1[2] = (a - c10) / h;
  g2[2] = (b - c20) / h;
  Vec3 u{g1[1] * g2[2] - g1[2] * g2[1], g1[2] * g2[0] - g1[0] * g2[2],
         g1[0] * g2[1] - g1[1] * g2[0]};
  const double un = std::sqrt(u.x * u.x + u.y * u.y + u.z * u.z);
  if (un < 1e-14) return 0;
  const double hs = 1e-5;
  const Point qp{q.x + hs * u.x / un, q.y + hs * u.y / un, q.z + hs * u.z / un};
  const Point qm{q.x - hs * u.x / un, q.y - hs * u.y / un, q.z - hs * u.z / un};
  return (distance(qp, s.A0) - distance(qm, s.A0)) / (2 * hs);
}

}  // namespace

SurfacePointResult surface_point_over(const TriangleSurface& s, const Point2D& base, double tol) {
  // z range from the sampled surface, inflated
  double zlo = std::min({s.A0.z, s.A1.z, s.A2.z});
  double zhi = std::max({s.A0.z, s.A1.z, s.A2.z});
  for (const auto& node : s.grid)
    if (node.ok) {
      zlo = std::min(zlo, node.p.z);
      zhi = std::max(zhi, node.p.z);
    }
  const double pad = 0.25 * (zhi - zlo) + 0.05;
  zlo -= pad;
  zhi += pad;

  const int steps = 96;
  std::vector<double> roots;
  double prev = 0;
  bool have_prev = false;
  for (int i = 0; i <= steps; ++i) {
    const double z = zlo + (zhi - zlo) * i / steps;
    double v;
    try {
      v = fibre_stationarity(s, base, z);
    } catch (const Error&) {
      have_prev = false;
      continue;
    }
    if (have_prev && prev * v <= 0 && (prev != 0 || v != 0)) {
      double a = zlo + (zhi - zlo) * (i - 1) / steps, fa = prev, b = z;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        double fm;
        try {
          fm = fibre_stationarity(s, base, m);
        } catch (const Error&) {
          break;
        }
        if (fa * fm <= 0)
          b = m;
        else {
          a = m;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = v;
    have_prev = true;
  }
  if (roots.empty())
    fail(ErrorKind::ArcSurfaceMiss, "no surface point on the fibre over this base point");

  // validate candidates with a warm constrained solve; keep the closest match
  SurfacePointResult best;
  double best_err = std::numeric_limits<double>::infinity();
  for (const double z : roots) {
    const Point q{base.x, base.y, z};
    const double dA0 = distance(s.A0, q), dA1 = distance(q, s.A1);
    if (dA0 < 1e-10 || dA1 < 1e-10) continue;
    SurfacePointOptions o;
    o.certify = false;
    o.warm_start = q;
    try {
      const auto r = triangle_surface_point(s.A0, s.A1, s.A2, dA0 / dA1, distance(s.A2, q) / dA0, o);
      const double err = euclid_dist(r.p, q);
      if (err < best_err) {
        best_err = err;
        // keep the fibre point itself: the stationarity root localizes it
        // more sharply than the validating solve
        best = r;
        best.p = q;
        ConstraintEval ce{&s.A0, &s.A1, &s.A2, dA0 / dA1, distance(s.A2, q) / dA0};
        ce.exact(q, best.c1, best.c2);
      }
    } catch (const Error&) {
    }
  }
  if (best_err > std::max(tol, 1e-6))
    fail(ErrorKind::ArcSurfaceMiss, "fibre stationary points are not surface points here");
  return best;
}

}  // namespace nil
