#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nil/surface.hpp"

namespace nil {

// Signed ratio of geodesic distances d(A,P)/d(P,B); negative when P lies
// outside the segment. residual: defect of the best triangle-inequality
// equality, i.e. distance of P from the geodesic line through A and B.
struct SimpleRatio {
  double value = 0;
  double residual = 0;
};

/// Fails with NotOnLine when the collinearity residual exceeds 1e-6.
SimpleRatio simple_ratio(const Point& A, const Point& P, const Point& B);

/// Anchor point of the ratio condition: P3 on the extension of the geodesic
/// line Aj-Ak with s(Ak,P3,Aj) = constant / (s(Aj,P1,Ai) * s(Ai,P2,Ak)),
/// for P1 strictly inside side Ai-Aj and P2 strictly inside side Ai-Ak,
/// not both midpoints. The product s(Aj,P1,Ai)*s(Ai,P2,Ak)*s(Ak,P3,Aj)
/// equals the constant (-1 by default) by construction.
Point menelaus_point(const Point& Ai, const Point& Aj, const Point& Ak, const Point& P1,
                     const Point& P2, double menelaus_constant = -1.0);

enum class SurfaceLineCase {
  FibreSegment,   // common fibre: vertical segment
  SideGeodesic,   // both points on one side geodesic: the side itself
  ChordArc,       // generic anchored-arc construction (side or interior points)
  Midline,        // both side midpoints: third side's theta
  Cevian,         // one endpoint at a vertex
};

const char* surface_line_case_name(SurfaceLineCase c);

struct SurfaceLine {
  Point p1, p2;
  SurfaceLineCase kind = SurfaceLineCase::ChordArc;
  ArcDescriptor arc;               // generating base-plane curve
  double theta_g = 0;              // lifted-geodesic theta parameter
  std::vector<Point> samples;      // on-surface samples, p1 .. p2
  std::vector<std::pair<double, double>> gaps;  // arc-length intervals with no lift
  bool root_multiplicity = false;  // several pencil members satisfied the condition
};

struct SurfaceLineOptions {
  int samples = 17;
  double membership_tol = 1e-5;
  double menelaus_constant = -1.0;
  double max_gap_fraction = 0.3;  // beyond this the lift is treated as failed
};

/// Connecting line of two surface points (the curve cases split on the
/// configuration of the endpoints; see SurfaceLineCase).
SurfaceLine surface_line(const TriangleSurface& surface, const Point& P1, const Point& P2,
                         const SurfaceLineOptions& opts = {});

struct CevaOptions {
  const TriangleSurface* surface = nullptr;  // reused chart for fibre lifts
  int line_samples = 9;
  bool build_lines = true;
  bool lift_t = true;                  // solve the surface point over T*
  double third_miss_flag = 1e-4;       // above this the inconsistency flag is set
  double third_miss_abort = 5e-2;      // relative to diameter: construction breakdown
  double menelaus_constant = -1.0;
};

struct CevaConfig {
  Point A0, A1, A2;
  double delta1 = 0, delta2 = 0, delta3 = 0;
  Point P12, P02, P01;                 // cevian feet
  Point2D T_star{};
  std::optional<Point> T;              // surface point over T_star
  std::vector<SurfaceLine> lines;      // cevian lines A0-P12, A1-P02, A2-P01
  double sn_product = 0;               // distance-ratio product, re-measured
  double sc_product = 0;               // projected arc-ratio product
  double third_cevian_miss = 0;        // distance of T_star from the third arc
  bool third_cevian_flag = false;
  bool intersection_multiplicity = false;
  TriangleType type = TriangleType::GeneralType;
};

/// Ceva configuration from the two base ratios: feet at delta1, delta2 and
/// 1/(delta1*delta2), T* from the two cevian arcs, consistency of the third
/// arc measured and surfaced (never silently accepted).
CevaConfig ceva_config(const Point& A0, const Point& A1, const Point& A2, double delta1,
                       double delta2, const CevaOptions& opts = {});

/// Product of the three side ratios, recomputed from the stored feet via the
/// distance solver.
double ceva_product(const CevaConfig& config);

/// Product of the projected arc-length ratios along the side arcs. Fails with
/// DegenerateProjection for fibre-type triangles.
double ceva_product_projected(const CevaConfig& config);

}  // namespace nil
