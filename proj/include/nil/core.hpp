#pragma once

#include <array>
#include <cmath>

namespace nil {

// Point of the model in affine coordinates; the homogeneous leading 1 of
// (1; x, y, z) is implicit and never stored.
struct Point {
  double x = 0, y = 0, z = 0;
};

// Parameters (x,y,z) of a group translation acting on points.
struct TranslationParams {
  double x = 0, y = 0, z = 0;
};

// Coordinate tangent vector at a point.
struct Vec3 {
  double x = 0, y = 0, z = 0;
};

inline bool finite(const Point& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline double euclid_dist(const Point& a, const Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Right-translation action on a point: (x+a, y+b, z + b*x + c) for point
/// (a,b,c) and translation (x,y,z).
Point translate(const Point& p, const TranslationParams& t);

/// Group composition: apply `first`, then `second`.
TranslationParams compose(const TranslationParams& second, const TranslationParams& first);

/// Params u with translate(translate(p, t), u) == p for every p.
TranslationParams inverse_translation(const TranslationParams& t);

/// Params mapping p to the origin.
TranslationParams translation_to_origin(const Point& p);

/// A point read as the translation carrying the origin onto it.
inline TranslationParams as_translation(const Point& p) { return {p.x, p.y, p.z}; }

/// Isometric rotation through omega (radians) about the z-axis at the origin.
/// Quadratic in x,y on the z coordinate.
Point rotate_about_z(const Point& p, double omega);

/// Shear z' = z - x*y/2 conjugating the rotation above to the linear one.
Point quadratic_map(const Point& p);
Point quadratic_map_inverse(const Point& p);

/// Differential of translate(., t): coordinate pushforward of a tangent vector.
Vec3 translate_differential(const TranslationParams& t, const Vec3& v);

// Metric tensor at a point, with inverse and unit determinant. Depends on x only.
struct MetricTensor {
  std::array<std::array<double, 3>, 3> g;
  std::array<std::array<double, 3>, 3> g_inv;
  double det() const;
};

MetricTensor metric_at(const Point& p);

/// sqrt(v^T g(p) v); zero iff v = 0.
double tangent_norm(const Point& p, const Vec3& v);

}  // namespace nil
