// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Evaluation of generated maps against ground truth: symmetric Chamfer
// distance in meters, occupancy-voxel IoU at a set of grid resolutions, and
// per-point error distances for external coloring.

#ifndef GDM_METRICS_METRICS_HPP
#define GDM_METRICS_METRICS_HPP

#include <chrono>
#include <cstddef>
#include <map>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/core/spatial_index.hpp"
#include "gdm/core/voxel.hpp"
#include "gdm/error.hpp"

namespace gdm {

/// Default IoU grid resolutions in meters.
inline const std::vector<double> kDefaultIouResolutions = {6.0, 4.0, 2.0};

struct EvalReport {
  double chamfer_m = 0.0;
  std::map<double, double> iou_pct;  // resolution (m) -> percentage
  double runtime_s = 0.0;
  std::size_t generated_points = 0;
  std::size_t truth_points = 0;
};

/// Mean distance from each point of `from` to its nearest point in `to_index`.
inline double mean_nearest_distance(const PointCloud& from,
                                    const SpatialIndex& to_index) {
  double sum = 0.0;
  for (const Vec3& p : from) {
    sum += to_index.nearest(p).distance;
  }
  return sum / static_cast<double>(from.size());
}

/**
 * Symmetric Chamfer distance in meters:
 *   CD = 1/2 * (mean_a min_b |a-b| + mean_b min_a |a-b|).
 */
inline double chamfer(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) {
    throw EmptyInput("chamfer: both clouds must be nonempty");
  }
  const SpatialIndex index_a(a);
  const SpatialIndex index_b(b);
  return 0.5 * (mean_nearest_distance(a, index_b) + mean_nearest_distance(b, index_a));
}

/// Occupancy-voxel Jaccard index at the given resolution, in percent.
inline double iou(const PointCloud& a, const PointCloud& b, double resolution) {
  if (a.empty() || b.empty()) {
    throw EmptyInput("iou: both clouds must be nonempty");
  }
  const VoxelSet va = voxelize(a, resolution);
  const VoxelSet vb = voxelize(b, resolution);
  const std::size_t inter = intersection_size(va, vb);
  const std::size_t uni = union_size(va, vb);
  return 100.0 * static_cast<double>(inter) / static_cast<double>(uni);
}

/// Distance from each generated point to its nearest ground-truth point.
inline std::vector<double> error_field(const PointCloud& generated,
                                       const PointCloud& truth) {
  if (generated.empty() || truth.empty()) {
    throw EmptyInput("error_field: both clouds must be nonempty");
  }
  const SpatialIndex truth_index(truth);
  std::vector<double> errors;
  errors.reserve(generated.size());
  for (const Vec3& p : generated) {
    errors.push_back(truth_index.nearest(p).distance);
  }
  return errors;
}

/// Chamfer + IoU at each resolution + wall-clock runtime of the evaluation.
inline EvalReport evaluate(const PointCloud& generated, const PointCloud& truth,
                           const std::vector<double>& resolutions = kDefaultIouResolutions) {
  const auto started = std::chrono::steady_clock::now();
  EvalReport report;
  report.generated_points = generated.size();
  report.truth_points = truth.size();
  report.chamfer_m = chamfer(generated, truth);
  for (double res : resolutions) {
    report.iou_pct[res] = iou(generated, truth, res);
  }
  report.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace gdm

#endif  // GDM_METRICS_METRICS_HPP
