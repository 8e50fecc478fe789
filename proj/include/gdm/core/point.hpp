// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GDM_CORE_POINT_HPP
#define GDM_CORE_POINT_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gdm/error.hpp"

namespace gdm {

/// 3D point/vector in meters, double precision.
using Vec3 = Eigen::Vector3d;

inline bool is_finite(const Vec3& p) {
  return std::isfinite(p.x()) && std::isfinite(p.y()) && std::isfinite(p.z());
}

/**
 * Ordered point cloud. Indices are stable identifiers until an explicit
 * resampling operation. Every admitted point is finite; construction and
 * push_back enforce this.
 */
class PointCloud {
 public:
  PointCloud() = default;

  explicit PointCloud(std::vector<Vec3> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!is_finite(points_[i])) {
        throw InvalidArgument("non-finite point at index " + std::to_string(i));
      }
    }
  }

  void push_back(const Vec3& p) {
    if (!is_finite(p)) {
      throw InvalidArgument("non-finite point");
    }
    points_.push_back(p);
  }

  void reserve(std::size_t n) { points_.reserve(n); }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  const Vec3& operator[](std::size_t i) const { return points_[i]; }

  const std::vector<Vec3>& data() const { return points_; }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

 private:
  std::vector<Vec3> points_;
};

}  // namespace gdm

#endif  // GDM_CORE_POINT_HPP
