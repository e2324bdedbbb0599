// Compares the serial reference path (jobs=1) against the OpenMP path for the
// sampling kernels and checks the outputs are identical.

#include <chrono>
#include <cstdio>

#include "nil/triangle.hpp"
#include "nil/verify.hpp"

namespace {

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_mesh(const nil::Mesh& a, const nil::Mesh& b) {
  if (a.vertices.size() != b.vertices.size() || a.triangles.size() != b.triangles.size())
    return false;
  for (std::size_t i = 0; i < a.vertices.size(); ++i)
    if (a.vertices[i].x != b.vertices[i].x || a.vertices[i].y != b.vertices[i].y ||
        a.vertices[i].z != b.vertices[i].z)
      return false;
  return a.triangles == b.triangles;
}

}  // namespace

int main() {
  const nil::ParallelOptions serial{1};
  const nil::ParallelOptions parallel{0};

  std::printf("kernel                 serial[s]  parallel[s]  speedup  identical\n");

  {
    const nil::SphereSpec spec({0, 0, 0}, 0.5 * nil::kPi);
    nil::Mesh ms, mp;
    const double ts = timed([&] { ms = nil::sphere_mesh(spec, 96, 96, serial); });
    const double tp = timed([&] { mp = nil::sphere_mesh(spec, 96, 96, parallel); });
    std::printf("sphere-mesh 96x96      %9.3f  %11.3f  %7.2f  %s\n", ts, tp, ts / tp,
                same_mesh(ms, mp) ? "yes" : "NO");
  }
  {
    const nil::ApolloniusSpec spec({-0.4, 0, 0}, {0.4, 0, 0}, 2.0);
    const nil::Box box{{-1.6, -1.6, -1.6}, {1.6, 1.6, 1.6}};
    nil::Mesh ms, mp;
    const double ts = timed([&] { ms = nil::apollonius_sample(spec, box, 48, serial); });
    const double tp = timed([&] { mp = nil::apollonius_sample(spec, box, 48, parallel); });
    std::printf("apollonius 48^3        %9.3f  %11.3f  %7.2f  %s\n", ts, tp, ts / tp,
                same_mesh(ms, mp) ? "yes" : "NO");
  }
  {
    double tri[3][3];
    nil::reference_triangle(tri);
    const nil::Point A0{tri[0][0], tri[0][1], tri[0][2]};
    const nil::Point A1{tri[1][0], tri[1][1], tri[1][2]};
    const nil::Point A2{tri[2][0], tri[2][1], tri[2][2]};
    nil::SurfacePointOptions so;
    so.certify = false;
    nil::TriangleSurface ss, sp;
    const double ts = timed([&] { ss = nil::triangle_surface_mesh(A0, A1, A2, 10, so, serial); });
    const double tp = timed([&] { sp = nil::triangle_surface_mesh(A0, A1, A2, 10, so, parallel); });
    bool same = ss.grid.size() == sp.grid.size();
    double worst = 0;
    for (std::size_t i = 0; same && i < ss.grid.size(); ++i) {
      if (ss.grid[i].ok != sp.grid[i].ok) same = false;
      if (ss.grid[i].ok) worst = std::max(worst, nil::euclid_dist(ss.grid[i].p, sp.grid[i].p));
    }
    std::printf("triangle-surface n=10  %9.3f  %11.3f  %7.2f  %s (max dev %.2e)\n", ts, tp,
                ts / tp, same ? "yes" : "NO", worst);
  }
  return 0;
}
