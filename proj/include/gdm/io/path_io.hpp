// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Pose/path file reading. Two row layouts, auto-detected by token count:
//   3 tokens   x y z
//   12 tokens  row-major 3x4 pose matrix; translation = columns 4/8/12
// Some pose exports prefix rows with a frame index, so 13 tokens are
// treated as index + matrix.

#ifndef GDM_IO_PATH_IO_HPP
#define GDM_IO_PATH_IO_HPP

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "gdm/core/point.hpp"
#include "gdm/error.hpp"

namespace gdm {

/// A full rigid pose (rotation + translation) in world frame.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

inline std::vector<Pose> read_poses(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path, 0, "cannot open file");
  }
  std::vector<Pose> poses;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<double> values;
    double v;
    while (row >> v) values.push_back(v);
    if (!row.eof()) {
      throw ParseError(path, line_no, "non-numeric token");
    }

    Pose pose;
    if (values.size() == 3) {
      pose.translation = Vec3(values[0], values[1], values[2]);
    } else if (values.size() == 12 || values.size() == 13) {
      const std::size_t base = values.size() - 12;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          pose.rotation(r, c) = values[base + 4 * r + c];
        }
        pose.translation[r] = values[base + 4 * r + 3];
      }
    } else {
      throw ParseError(path, line_no,
                       "expected 3 or 12 values, got " +
                           std::to_string(values.size()));
    }
    if (!is_finite(pose.translation)) {
      throw ParseError(path, line_no, "non-finite pose");
    }
    poses.push_back(pose);
  }
  return poses;
}

/// Just the positions, for path-only workflows.
inline std::vector<Vec3> read_path_points(const std::string& path) {
  std::vector<Vec3> points;
  for (const Pose& pose : read_poses(path)) {
    points.push_back(pose.translation);
  }
  return points;
}

inline void write_path_points(const std::string& path,
                              const std::vector<Vec3>& points) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidArgument("write_path_points: cannot open " + path);
  }
  out << std::fixed << std::setprecision(6);
  for (const Vec3& p : points) {
    out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
}

}  // namespace gdm

#endif  // GDM_IO_PATH_IO_HPP
