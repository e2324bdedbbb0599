#include "nil/core.hpp"

namespace nil {

Point translate(const Point& p, const TranslationParams& t) {
  return {p.x + t.x, p.y + t.y, t.z + p.y * t.x + p.z};
}

TranslationParams compose(const TranslationParams& second, const TranslationParams& first) {
  // Matrix product of the corresponding unitriangular matrices.
  return {first.x + second.x, first.y + second.y, first.z + second.x * first.y + second.z};
}

TranslationParams inverse_translation(const TranslationParams& t) {
  return {-t.x, -t.y, t.x * t.y - t.z};
}

TranslationParams translation_to_origin(const Point& p) {
  return inverse_translation(as_translation(p));
}

Point rotate_about_z(const Point& p, double omega) {
  const double co = std::cos(omega), so = std::sin(omega);
  const double xb = p.x * co - p.y * so;
  const double yb = p.x * so + p.y * co;
  const double zb = p.z - 0.5 * p.x * p.y + 0.25 * (p.x * p.x - p.y * p.y) * std::sin(2 * omega) +
                    0.5 * p.x * p.y * std::cos(2 * omega);
  return {xb, yb, zb};
}

Point quadratic_map(const Point& p) { return {p.x, p.y, p.z - 0.5 * p.x * p.y}; }

Point quadratic_map_inverse(const Point& p) { return {p.x, p.y, p.z + 0.5 * p.x * p.y}; }

Vec3 translate_differential(const TranslationParams& t, const Vec3& v) {
  // x' = x + tx, y' = y + ty, z' = tz + y*tx + z.
  return {v.x, v.y, t.x * v.y + v.z};
}

double MetricTensor::det() const {
  const auto& m = g;
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

MetricTensor metric_at(const Point& p) {
  const double x = p.x;
  MetricTensor m;
  m.g = {{{1, 0, 0}, {0, 1 + x * x, -x}, {0, -x, 1}}};
  m.g_inv = {{{1, 0, 0}, {0, 1, x}, {0, x, 1 + x * x}}};
  return m;
}

double tangent_norm(const Point& p, const Vec3& v) {
  const double x = p.x;
  // v^T g v with g from metric_at, written out.
  const double q = v.x * v.x + (1 + x * x) * v.y * v.y - 2 * x * v.y * v.z + v.z * v.z;
  return std::sqrt(q < 0 ? 0 : q);
}

}  // namespace nil
