#include "nil/io.hpp"

#include <cstdio>
#include <cctype>
#include <fstream>
#include <sstream>

#include "nil/errors.hpp"

namespace nil {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<double> parse_csv_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "not a number: '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) fail(ErrorKind::InvalidInput, "trailing junk in number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::InvalidInput, "cannot open output file: " + path);
  return f;
}

}  // namespace

Point parse_point(const std::string& text) {
  const auto v = parse_csv_numbers(text);
  if (v.size() == 3) return {v[0], v[1], v[2]};
  if (v.size() == 4) {
    if (v[0] == 0) fail(ErrorKind::InvalidInput, "homogeneous point with zero leading coordinate");
    return {v[1] / v[0], v[2] / v[0], v[3] / v[0]};
  }
  fail(ErrorKind::InvalidInput, "point needs 3 (or homogeneous 4) comma-separated coordinates");
}

Box parse_box(const std::string& text) {
  const auto v = parse_csv_numbers(text);
  if (v.size() != 6) fail(ErrorKind::InvalidInput, "box needs 6 comma-separated numbers");
  Box b{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
  if (!(b.lo.x < b.hi.x && b.lo.y < b.hi.y && b.lo.z < b.hi.z))
    fail(ErrorKind::InvalidInput, "box minimum must be strictly below its maximum");
  return b;
}

void write_obj(const Mesh& mesh, const std::string& path) {
  auto f = open_out(path);
  for (const Point& v : mesh.vertices)
    f << "v " << format_double(v.x) << ' ' << format_double(v.y) << ' ' << format_double(v.z)
      << '\n';
  for (const auto& t : mesh.triangles)
    f << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_mesh_csv(const Mesh& mesh, const std::string& path) {
  auto f = open_out(path);
  f << "x,y,z,param_u,param_v\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Point& v = mesh.vertices[i];
    const auto uv = i < mesh.vertex_params.size() ? mesh.vertex_params[i]
                                                  : std::array<double, 2>{0, 0};
    f << format_double(v.x) << ',' << format_double(v.y) << ',' << format_double(v.z) << ','
      << format_double(uv[0]) << ',' << format_double(uv[1]) << '\n';
  }
}

void write_curve_csv(const std::vector<CurveSample>& samples, const std::string& path) {
  auto f = open_out(path);
  f << "t,x,y,z\n";
  for (const auto& s : samples)
    f << format_double(s.t) << ',' << format_double(s.p.x) << ',' << format_double(s.p.y) << ','
      << format_double(s.p.z) << '\n';
}

}  // namespace nil
