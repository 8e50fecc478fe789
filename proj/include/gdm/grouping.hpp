// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Partitioning of a map into groups around central points, and the
// world <-> centered coordinate conversion used by the diffusion math.

#ifndef GDM_GROUPING_HPP
#define GDM_GROUPING_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/core/spatial_index.hpp"
#include "gdm/error.hpp"

namespace gdm {

/**
 * A point cloud partitioned into m groups, each with a central point C^i.
 * Groups are index sets over the parent cloud: pairwise disjoint, and their
 * union covers every parent index. Empty groups are legal (a center may
 * receive no points); they are skipped by loss computation downstream.
 */
struct GroupedMap {
  PointCloud parent;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<Vec3> centers;

  std::size_t group_count() const { return groups.size(); }

  /// Checks the partition property. Throws InvalidArgument on violation.
  void validate() const {
    if (groups.empty() || groups.size() != centers.size()) {
      throw InvalidArgument("GroupedMap: need m >= 1 groups with matching centers");
    }
    std::vector<char> seen(parent.size(), 0);
    std::size_t total = 0;
    for (const auto& group : groups) {
      for (std::size_t idx : group) {
        if (idx >= parent.size() || seen[idx]) {
          throw InvalidArgument("GroupedMap: groups must partition the parent");
        }
        seen[idx] = 1;
        ++total;
      }
    }
    if (total != parent.size()) {
      throw InvalidArgument("GroupedMap: groups must cover every parent index");
    }
  }
};

/// Per-group point sets in centered coordinates, paired with their centers.
struct NormalizedGroups {
  std::vector<std::vector<Vec3>> groups;
  std::vector<Vec3> centers;

  std::size_t total_points() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    return n;
  }
};

/// Assign each point to its nearest center (ties -> lowest center index).
inline GroupedMap assign_groups(const PointCloud& cloud,
                                const std::vector<Vec3>& centers) {
  if (cloud.empty()) {
    throw EmptyInput("assign_groups: empty cloud");
  }
  if (centers.empty()) {
    throw EmptyInput("assign_groups: empty center list");
  }
  GroupedMap out;
  out.parent = cloud;
  out.centers = centers;
  out.groups.assign(centers.size(), {});

  SpatialIndex center_index{PointCloud(centers)};
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out.groups[center_index.nearest(cloud[i]).index].push_back(i);
  }
  return out;
}

/// C^i = arithmetic mean of group i's points. Throws on any empty group.
inline std::vector<Vec3> group_centroids(const GroupedMap& grouped) {
  std::vector<Vec3> centroids;
  centroids.reserve(grouped.groups.size());
  for (std::size_t i = 0; i < grouped.groups.size(); ++i) {
    const auto& group = grouped.groups[i];
    if (group.empty()) {
      throw DegenerateGroup("group_centroids: group " + std::to_string(i) +
                            " is empty");
    }
    Vec3 sum = Vec3::Zero();
    for (std::size_t idx : group) {
      sum += grouped.parent[idx];
    }
    centroids.push_back(sum / static_cast<double>(group.size()));
  }
  return centroids;
}

/// g^i_j = p^i_j - C^i for every point j of group i.
inline NormalizedGroups normalize(const GroupedMap& grouped) {
  if (grouped.groups.size() != grouped.centers.size()) {
    throw InvalidArgument("normalize: centers not defined for all groups");
  }
  NormalizedGroups out;
  out.centers = grouped.centers;
  out.groups.reserve(grouped.groups.size());
  for (std::size_t i = 0; i < grouped.groups.size(); ++i) {
    std::vector<Vec3> g;
    g.reserve(grouped.groups[i].size());
    for (std::size_t idx : grouped.groups[i]) {
      g.push_back(grouped.parent[idx] - grouped.centers[i]);
    }
    out.groups.push_back(std::move(g));
  }
  return out;
}

/// World coordinates restored, group-major then in-group order.
inline PointCloud denormalize(const NormalizedGroups& normalized) {
  if (normalized.groups.size() != normalized.centers.size()) {
    throw InvalidArgument("denormalize: group/center length mismatch");
  }
  std::vector<Vec3> pts;
  pts.reserve(normalized.total_points());
  for (std::size_t i = 0; i < normalized.groups.size(); ++i) {
    for (const Vec3& g : normalized.groups[i]) {
      pts.push_back(normalized.centers[i] + g);
    }
  }
  return PointCloud(std::move(pts));
}

/// Drop groups that received no points, keeping group order.
inline GroupedMap drop_empty_groups(const GroupedMap& grouped) {
  GroupedMap out;
  out.parent = grouped.parent;
  for (std::size_t i = 0; i < grouped.groups.size(); ++i) {
    if (!grouped.groups[i].empty()) {
      out.groups.push_back(grouped.groups[i]);
      out.centers.push_back(grouped.centers[i]);
    }
  }
  if (out.groups.empty()) {
    throw DegenerateGroup("drop_empty_groups: all groups empty");
  }
  return out;
}

/// Replace centers with per-group centroids (the data-derived C of training).
inline GroupedMap recenter_on_centroids(const GroupedMap& grouped) {
  GroupedMap out = grouped;
  out.centers = group_centroids(grouped);
  return out;
}

}  // namespace gdm

#endif  // GDM_GROUPING_HPP
