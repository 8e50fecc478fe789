// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GDM_CORE_VOXEL_HPP
#define GDM_CORE_VOXEL_HPP

#include <cmath>
#include <cstdint>
#include <unordered_set>

#include "gdm/core/point.hpp"
#include "gdm/error.hpp"

namespace gdm {

/// Integer 3D cell coordinate: c = floor(coordinate / resolution) per axis.
struct VoxelKey {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  bool operator==(const VoxelKey&) const = default;
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 73856093ULL;
    h ^= static_cast<std::uint64_t>(k.y) * 19349663ULL;
    h ^= static_cast<std::uint64_t>(k.z) * 83492791ULL;
    return static_cast<std::size_t>(h);
  }
};

/// Occupancy voxel set at a fixed resolution. Exact set semantics.
struct VoxelSet {
  double resolution = 1.0;
  std::unordered_set<VoxelKey, VoxelKeyHash> occupied;

  std::size_t size() const { return occupied.size(); }
  bool contains(const VoxelKey& k) const { return occupied.count(k) > 0; }
};

inline VoxelKey voxel_key(const Vec3& p, double resolution) {
  return {static_cast<std::int64_t>(std::floor(p.x() / resolution)),
          static_cast<std::int64_t>(std::floor(p.y() / resolution)),
          static_cast<std::int64_t>(std::floor(p.z() / resolution))};
}

/// Occupied cells = cells containing at least one point of the cloud.
inline VoxelSet voxelize(const PointCloud& cloud, double resolution) {
  if (!(resolution > 0.0)) {
    throw InvalidArgument("voxelize: resolution must be > 0");
  }
  VoxelSet out;
  out.resolution = resolution;
  out.occupied.reserve(cloud.size());
  for (const Vec3& p : cloud) {
    out.occupied.insert(voxel_key(p, resolution));
  }
  return out;
}

inline std::size_t intersection_size(const VoxelSet& a, const VoxelSet& b) {
  const VoxelSet& small = a.size() <= b.size() ? a : b;
  const VoxelSet& large = a.size() <= b.size() ? b : a;
  std::size_t n = 0;
  for (const VoxelKey& k : small.occupied) {
    if (large.contains(k)) ++n;
  }
  return n;
}

inline std::size_t union_size(const VoxelSet& a, const VoxelSet& b) {
  return a.size() + b.size() - intersection_size(a, b);
}

}  // namespace gdm

#endif  // GDM_CORE_VOXEL_HPP
