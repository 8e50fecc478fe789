// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GDM_CORE_FPS_HPP
#define GDM_CORE_FPS_HPP

#include <cstddef>
#include <limits>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/error.hpp"

namespace gdm {

/**
 * Greedy farthest point sampling.
 *
 * result[0] = start_index; each subsequent pick maximizes the distance to
 * the already-selected set, ties broken by lowest index. O(n * k).
 */
inline std::vector<std::size_t> farthest_point_sample(const PointCloud& cloud,
                                                      std::size_t k,
                                                      std::size_t start_index = 0) {
  const std::size_t n = cloud.size();
  if (n == 0) {
    throw EmptyInput("farthest_point_sample: empty cloud");
  }
  if (k < 1 || k > n) {
    throw InvalidArgument("farthest_point_sample: k must be in [1, n]");
  }
  if (start_index >= n) {
    throw InvalidArgument("farthest_point_sample: start_index out of range");
  }

  std::vector<std::size_t> selected;
  selected.reserve(k);
  selected.push_back(start_index);

  // min_d2[i] tracks the squared distance from i to the selected set.
  std::vector<double> min_d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    min_d2[i] = (cloud[i] - cloud[start_index]).squaredNorm();
  }

  while (selected.size() < k) {
    std::size_t pick = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (min_d2[i] > best) {
        best = min_d2[i];
        pick = i;
      }
    }
    selected.push_back(pick);
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = (cloud[i] - cloud[pick]).squaredNorm();
      if (d2 < min_d2[i]) {
        min_d2[i] = d2;
      }
    }
  }
  return selected;
}

/// Materialize the sampled subset, preserving selection order.
inline PointCloud gather(const PointCloud& cloud,
                         const std::vector<std::size_t>& indices) {
  std::vector<Vec3> pts;
  pts.reserve(indices.size());
  for (std::size_t i : indices) {
    pts.push_back(cloud[i]);
  }
  return PointCloud(std::move(pts));
}

}  // namespace gdm

#endif  // GDM_CORE_FPS_HPP
