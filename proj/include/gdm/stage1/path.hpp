// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Path geometry for stage 1: tangents by finite differences and horizontal
// left-of-travel unit normals.

#ifndef GDM_STAGE1_PATH_HPP
#define GDM_STAGE1_PATH_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/error.hpp"

namespace gdm {

/**
 * An ordered path with derived per-point tangents and unit normals.
 * Normals are horizontal (zero z), unit length, and orthogonal to the
 * tangent; they point to the left of the direction of travel.
 */
struct PathTrack {
  std::vector<Vec3> points;
  std::vector<Vec3> tangents;  // not normalized
  std::vector<Vec3> normals;   // unit, horizontal

  std::size_t size() const { return points.size(); }
};

/**
 * Tangent at interior points by central difference, endpoints one-sided.
 * Throws DegenerateTangent when a tangent has no horizontal projection.
 */
inline PathTrack estimate_tangents_normals(const std::vector<Vec3>& path_points) {
  const std::size_t n = path_points.size();
  if (n < 2) {
    throw InvalidArgument("estimate_tangents_normals: need >= 2 path points");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (path_points[i] == path_points[i + 1]) {
      throw InvalidArgument("estimate_tangents_normals: duplicate consecutive "
                            "path point at index " + std::to_string(i));
    }
  }

  PathTrack track;
  track.points = path_points;
  track.tangents.resize(n);
  track.normals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 tangent;
    if (i == 0) {
      tangent = path_points[1] - path_points[0];
    } else if (i == n - 1) {
      tangent = path_points[n - 1] - path_points[n - 2];
    } else {
      tangent = path_points[i + 1] - path_points[i - 1];
    }
    const double horizontal = std::hypot(tangent.x(), tangent.y());
    if (horizontal < 1e-12) {
      throw DegenerateTangent("estimate_tangents_normals: vertical tangent at "
                              "index " + std::to_string(i));
    }
    track.tangents[i] = tangent;
    // Left of travel: rotate the horizontal projection +90 degrees.
    track.normals[i] = Vec3(-tangent.y(), tangent.x(), 0.0) / horizontal;
  }
  return track;
}

/**
 * Resample a polyline to (approximately) uniform arc-length spacing.
 * Emits the first point, then one point per `spacing` meters of travel by
 * linear interpolation, and always ends on the final input point.
 * Exactly coincident consecutive inputs are collapsed first.
 */
inline std::vector<Vec3> resample_arclength(const std::vector<Vec3>& points,
                                            double spacing = 1.0) {
  if (!(spacing > 0.0)) {
    throw InvalidArgument("resample_arclength: spacing must be > 0");
  }
  std::vector<Vec3> input;
  input.reserve(points.size());
  for (const Vec3& p : points) {
    if (input.empty() || p != input.back()) {
      input.push_back(p);
    }
  }
  if (input.size() < 2) {
    throw InvalidArgument("resample_arclength: need >= 2 distinct points");
  }

  std::vector<Vec3> out;
  out.push_back(input.front());
  double next_s = spacing;
  double walked = 0.0;
  for (std::size_t i = 0; i + 1 < input.size(); ++i) {
    const Vec3 a = input[i];
    const Vec3 b = input[i + 1];
    const double seg = (b - a).norm();
    while (next_s <= walked + seg) {
      const double frac = (next_s - walked) / seg;
      out.push_back(a + frac * (b - a));
      next_s += spacing;
    }
    walked += seg;
  }
  // Keep the endpoint unless the last emitted sample already sits on it.
  if ((out.back() - input.back()).norm() > 1e-9) {
    out.push_back(input.back());
  }
  return out;
}

/// Total polyline length in meters.
inline double arc_length(const std::vector<Vec3>& points) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    s += (points[i + 1] - points[i]).norm();
  }
  return s;
}

}  // namespace gdm

#endif  // GDM_STAGE1_PATH_HPP
