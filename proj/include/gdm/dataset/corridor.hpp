// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Synthetic corridor scenes: a gently drifting path with a filled, roughly
// planar corridor of points around it. These stand in for real map blocks
// when training at desk scale; scenes are scattered and rotated so the
// network sees center coordinates across the whole placement range.

#ifndef GDM_DATASET_CORRIDOR_HPP
#define GDM_DATASET_CORRIDOR_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/error.hpp"
#include "gdm/grouping.hpp"
#include "gdm/rng.hpp"
#include "gdm/stage1/path.hpp"

namespace gdm {

struct CorridorSpec {
  double path_length = 24.0;    // meters of travel
  double half_width = 8.0;      // lateral corridor half-extent
  std::size_t points = 2000;    // ground-truth point count
  double placement_range = 80.0;  // scenes scattered in +-range (x and y)
  double heading_drift = 0.06;  // max per-meter heading change, radians
  double ground_z = 1.0;        // corridor plane height
  double undulation = 0.2;      // height ripple amplitude
  double undulation_wavelength = 20.0;

  void validate() const {
    if (!(path_length >= 2.0)) {
      throw InvalidArgument("CorridorSpec: path_length must be >= 2");
    }
    if (!(half_width > 0.0)) {
      throw InvalidArgument("CorridorSpec: half_width must be > 0");
    }
    if (points == 0) {
      throw InvalidArgument("CorridorSpec: need at least one point");
    }
  }
};

struct CorridorScene {
  PointCloud cloud;
  std::vector<Vec3> path;  // one pose per meter, in the corridor plane
};

/// Deterministic in (spec, seed).
inline CorridorScene make_corridor_scene(const CorridorSpec& spec,
                                         std::uint64_t seed) {
  spec.validate();
  RandomStream rng(seed);

  CorridorScene scene;
  const std::size_t n_path = static_cast<std::size_t>(spec.path_length) + 1;
  scene.path.reserve(n_path);

  Vec3 position(rng.uniform(-spec.placement_range, spec.placement_range),
                rng.uniform(-spec.placement_range, spec.placement_range),
                spec.ground_z);
  double heading = rng.uniform(0.0, 2.0 * M_PI);
  std::vector<double> headings;
  for (std::size_t i = 0; i < n_path; ++i) {
    scene.path.push_back(position);
    headings.push_back(heading);
    heading += rng.uniform(-spec.heading_drift, spec.heading_drift);
    position += Vec3(std::cos(heading), std::sin(heading), 0.0);
  }

  // Uniform fill of the corridor band around the path, with a slight
  // height ripple along the travel direction.
  std::vector<Vec3> pts;
  pts.reserve(spec.points);
  for (std::size_t i = 0; i < spec.points; ++i) {
    const double s = rng.uniform(-0.5, spec.path_length + 0.5);
    const double lateral = rng.uniform(-spec.half_width - 0.5, spec.half_width + 0.5);
    const std::size_t seg = std::min<std::size_t>(
        static_cast<std::size_t>(std::max(0.0, std::floor(s))), n_path - 2);
    const double frac = s - static_cast<double>(seg);
    const Vec3 base = scene.path[seg] + frac * (scene.path[seg + 1] - scene.path[seg]);
    const double h = headings[seg];
    const Vec3 normal(-std::sin(h), std::cos(h), 0.0);
    const double z_ripple =
        spec.undulation * std::sin(2.0 * M_PI * s / spec.undulation_wavelength);
    Vec3 p = base + lateral * normal;
    p.z() = spec.ground_z + z_ripple;
    pts.push_back(p);
  }
  scene.cloud = PointCloud(std::move(pts));
  return scene;
}

/// Per-group per-axis population standard deviation of centered coordinates.
inline std::vector<Vec3> group_axis_std(const GroupedMap& grouped) {
  const NormalizedGroups centered = normalize(recenter_on_centroids(grouped));
  std::vector<Vec3> stds;
  stds.reserve(centered.groups.size());
  for (const auto& group : centered.groups) {
    Vec3 var = Vec3::Zero();
    for (const Vec3& g : group) {
      var += g.cwiseProduct(g);
    }
    var /= static_cast<double>(group.size());
    stds.push_back(var.cwiseSqrt());
  }
  return stds;
}

/// Aggregate statistics recorded in dataset manifests.
struct CorpusStats {
  double mean_points_per_group = 0.0;
  Vec3 mean_axis_std = Vec3::Zero();
  std::size_t group_count = 0;
  std::size_t point_count = 0;
};

inline CorpusStats corpus_stats(const std::vector<GroupedMap>& dataset) {
  CorpusStats stats;
  Vec3 std_sum = Vec3::Zero();
  for (const GroupedMap& map : dataset) {
    stats.group_count += map.group_count();
    stats.point_count += map.parent.size();
    for (const Vec3& s : group_axis_std(map)) {
      std_sum += s;
    }
  }
  if (stats.group_count > 0) {
    stats.mean_points_per_group = static_cast<double>(stats.point_count) /
                                  static_cast<double>(stats.group_count);
    stats.mean_axis_std = std_sum / static_cast<double>(stats.group_count);
  }
  return stats;
}

}  // namespace gdm

#endif  // GDM_DATASET_CORRIDOR_HPP
