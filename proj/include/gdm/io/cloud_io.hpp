// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Point-cloud file io. Two formats:
//   xyz-text   one "x y z" row per point, 6 decimal places on write
//   ply-binary binary_little_endian PLY with float x/y/z properties, plus
//              an optional per-vertex float scalar (used for error maps)
// The PLY reader accepts extra scalar vertex properties and skips them;
// list properties are rejected by name.

#ifndef GDM_IO_CLOUD_IO_HPP
#define GDM_IO_CLOUD_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/error.hpp"

namespace gdm {

enum class CloudFormat { XyzText, PlyBinary };

inline CloudFormat format_from_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".ply") return CloudFormat::PlyBinary;
  return CloudFormat::XyzText;
}

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "ply io assumes a little-endian host");

struct PlyProperty {
  std::string type;
  std::string name;
};

inline std::size_t ply_scalar_size(const std::string& type,
                                   const std::string& path) {
  if (type == "float" || type == "float32" || type == "int" || type == "int32" ||
      type == "uint" || type == "uint32") {
    return 4;
  }
  if (type == "double" || type == "float64") return 8;
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") {
    return 1;
  }
  if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") {
    return 2;
  }
  throw ParseError(path, 0, "unsupported property type '" + type + "'");
}

inline double read_ply_scalar(std::istream& in, const std::string& type,
                              const std::string& path) {
  char buf[8];
  const std::size_t size = ply_scalar_size(type, path);
  in.read(buf, static_cast<std::streamsize>(size));
  if (!in) {
    throw ParseError(path, 0, "truncated vertex data");
  }
  if (type == "float" || type == "float32") {
    float v;
    std::memcpy(&v, buf, 4);
    return v;
  }
  if (type == "double" || type == "float64") {
    double v;
    std::memcpy(&v, buf, 8);
    return v;
  }
  // Integer-typed coordinates are accepted and widened.
  std::int64_t v = 0;
  std::memcpy(&v, buf, size);
  return static_cast<double>(v);
}

}  // namespace detail

inline void write_cloud_xyz(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidArgument("write_cloud: cannot open " + path);
  }
  out << std::fixed << std::setprecision(6);
  for (const Vec3& p : cloud) {
    out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
  if (!out) {
    throw InvalidArgument("write_cloud: write failed for " + path);
  }
}

inline PointCloud read_cloud_xyz(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path, 0, "cannot open file");
  }
  std::vector<Vec3> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    double x, y, z;
    if (!(row >> x >> y >> z)) {
      throw ParseError(path, line_no, "expected 3 numeric tokens");
    }
    std::string extra;
    if (row >> extra) {
      throw ParseError(path, line_no, "unexpected extra token '" + extra + "'");
    }
    pts.emplace_back(x, y, z);
  }
  return PointCloud(std::move(pts));
}

/// Binary little-endian PLY with float32 x/y/z, plus an optional extra
/// per-vertex float property (e.g. "error").
inline void write_cloud_ply(const std::string& path, const PointCloud& cloud,
                            const std::vector<double>* scalar = nullptr,
                            const std::string& scalar_name = "error") {
  if (scalar && scalar->size() != cloud.size()) {
    throw InvalidArgument("write_cloud_ply: scalar size mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidArgument("write_cloud: cannot open " + path);
  }
  out << "ply\n"
      << "format binary_little_endian 1.0\n"
      << "element vertex " << cloud.size() << "\n"
      << "property float x\n"
      << "property float y\n"
      << "property float z\n";
  if (scalar) {
    out << "property float " << scalar_name << "\n";
  }
  out << "end_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const float row[3] = {static_cast<float>(cloud[i].x()),
                          static_cast<float>(cloud[i].y()),
                          static_cast<float>(cloud[i].z())};
    out.write(reinterpret_cast<const char*>(row), sizeof(row));
    if (scalar) {
      const float v = static_cast<float>((*scalar)[i]);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
  if (!out) {
    throw InvalidArgument("write_cloud: write failed for " + path);
  }
}

inline PointCloud read_cloud_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path, 0, "cannot open file");
  }
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) {
      throw ParseError(path, line_no, "unexpected end of header");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  if (next_line() != "ply") {
    throw ParseError(path, 1, "not a PLY file");
  }
  if (next_line() != "format binary_little_endian 1.0") {
    throw ParseError(path, line_no, "only binary_little_endian 1.0 is supported");
  }

  std::size_t vertex_count = 0;
  std::vector<detail::PlyProperty> properties;
  bool in_vertex_element = false;
  while (true) {
    std::istringstream header(next_line());
    std::string token;
    header >> token;
    if (token == "end_header") break;
    if (token == "comment") continue;
    if (token == "element") {
      std::string name;
      std::size_t count = 0;
      header >> name >> count;
      if (name == "vertex") {
        vertex_count = count;
        in_vertex_element = true;
      } else {
        if (count != 0) {
          throw ParseError(path, line_no, "unsupported element '" + name + "'");
        }
        in_vertex_element = false;
      }
      continue;
    }
    if (token == "property") {
      std::string type;
      header >> type;
      if (type == "list") {
        std::string count_type, value_type, name;
        header >> count_type >> value_type >> name;
        throw ParseError(path, line_no,
                         "unsupported list property '" + name + "'");
      }
      std::string name;
      header >> name;
      if (in_vertex_element) {
        detail::ply_scalar_size(type, path);  // reject unknown types early
        properties.push_back({type, name});
      }
      continue;
    }
    throw ParseError(path, line_no, "unrecognized header line '" + token + "'");
  }

  int ix = -1, iy = -1, iz = -1;
  for (std::size_t i = 0; i < properties.size(); ++i) {
    if (properties[i].name == "x") ix = static_cast<int>(i);
    if (properties[i].name == "y") iy = static_cast<int>(i);
    if (properties[i].name == "z") iz = static_cast<int>(i);
  }
  if (ix < 0 || iy < 0 || iz < 0) {
    throw ParseError(path, line_no, "vertex element lacks x/y/z properties");
  }

  std::vector<Vec3> pts;
  pts.reserve(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    double coords[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < properties.size(); ++i) {
      const double value = detail::read_ply_scalar(in, properties[i].type, path);
      if (static_cast<int>(i) == ix) coords[0] = value;
      if (static_cast<int>(i) == iy) coords[1] = value;
      if (static_cast<int>(i) == iz) coords[2] = value;
    }
    pts.emplace_back(coords[0], coords[1], coords[2]);
  }
  return PointCloud(std::move(pts));
}

inline void write_cloud(const std::string& path, const PointCloud& cloud,
                        CloudFormat format) {
  if (format == CloudFormat::XyzText) {
    write_cloud_xyz(path, cloud);
  } else {
    write_cloud_ply(path, cloud);
  }
}

inline void write_cloud(const std::string& path, const PointCloud& cloud) {
  write_cloud(path, cloud, format_from_extension(path));
}

inline PointCloud read_cloud(const std::string& path, CloudFormat format) {
  return format == CloudFormat::XyzText ? read_cloud_xyz(path)
                                        : read_cloud_ply(path);
}

inline PointCloud read_cloud(const std::string& path) {
  return read_cloud(path, format_from_extension(path));
}

}  // namespace gdm

#endif  // GDM_IO_CLOUD_IO_HPP
