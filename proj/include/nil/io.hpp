#pragma once

#include <string>
#include <vector>

#include "nil/surface.hpp"
#include "nil/verify.hpp"

namespace nil {

/// 17-significant-digit decimal form; round-trips doubles exactly.
std::string format_double(double v);

/// Affine point from "x,y,z"; a homogeneous 4-tuple "c,x,y,z" is normalized
/// by its (nonzero) leading coordinate.
Point parse_point(const std::string& text);

/// "xmin,ymin,zmin,xmax,ymax,zmax"
Box parse_box(const std::string& text);

void write_obj(const Mesh& mesh, const std::string& path);
void write_mesh_csv(const Mesh& mesh, const std::string& path);

struct CurveSample {
  Point p;
  double t = 0;
};
void write_curve_csv(const std::vector<CurveSample>& samples, const std::string& path);

}  // namespace nil
