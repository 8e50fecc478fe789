// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GDM_DATASET_SPARSE_HPP
#define GDM_DATASET_SPARSE_HPP

#include <cstddef>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/error.hpp"
#include "gdm/rng.hpp"
#include "gdm/stage1/centers.hpp"

namespace gdm {

/**
 * Uniform sample of k points without replacement, seeded. Selection
 * sampling keeps the output in ascending index order (k = n returns the
 * whole cloud in order).
 */
inline SparseHits sample_sparse_hits(const PointCloud& map, std::size_t k,
                                     std::uint64_t seed) {
  if (k > map.size()) {
    throw InvalidArgument("sample_sparse_hits: k exceeds cloud size");
  }
  RandomStream rng(seed);
  std::vector<Vec3> hits;
  hits.reserve(k);
  std::size_t chosen = 0;
  for (std::size_t i = 0; i < map.size() && chosen < k; ++i) {
    const std::size_t remaining = map.size() - i;
    if (rng.index(remaining) < k - chosen) {
      hits.push_back(map[i]);
      ++chosen;
    }
  }
  return SparseHits(std::move(hits));
}

}  // namespace gdm

#endif  // GDM_DATASET_SPARSE_HPP
