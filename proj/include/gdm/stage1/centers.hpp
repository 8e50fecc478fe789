// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Stage 1: central points from a path. One center per meter along each
// path point's normal, out to a per-point width, on both sides of the path.
// Widths come from one of three generation modes: fixed, random in a range,
// or estimated from sparse positioning hits.

#ifndef GDM_STAGE1_CENTERS_HPP
#define GDM_STAGE1_CENTERS_HPP

#include <cmath>
#include <cstddef>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/core/voxel.hpp"
#include "gdm/diffusion/diffusion.hpp"
#include "gdm/error.hpp"
#include "gdm/rng.hpp"
#include "gdm/stage1/path.hpp"

namespace gdm {

/// Sparse positioning contacts (e.g. a handful of sampled LiDAR returns).
using SparseHits = PointCloud;

/// Mode 1: path only, fixed corridor width.
struct FixedWidth {
  double w = 20.0;
};

/// Mode 2: path plus a per-point random width drawn from [low, high].
struct RandomWidth {
  double low = 15.0;
  double high = 35.0;
};

/// Mode 3: path plus sparse hits; width estimated per path point.
struct EstimatedWidth {
  SparseHits hits;
  double cap = 50.0;  // clamp for stray far hits
};

using GenerationMode = std::variant<FixedWidth, RandomWidth, EstimatedWidth>;

inline void validate(const GenerationMode& mode) {
  if (const auto* m1 = std::get_if<FixedWidth>(&mode)) {
    if (!(m1->w > 0.0)) throw InvalidArgument("Mode 1: width must be > 0");
  } else if (const auto* m2 = std::get_if<RandomWidth>(&mode)) {
    if (!(m2->low > 0.0) || !(m2->low <= m2->high)) {
      throw InvalidArgument("Mode 2: need 0 < low <= high");
    }
  } else if (const auto* m3 = std::get_if<EstimatedWidth>(&mode)) {
    if (m3->hits.empty()) throw EmptyInput("Mode 3: hits must be nonempty");
  }
}

/**
 * Distance from the tangent line at path point `point_index` to the nearest
 * hit: w = min over hits of the point-to-line distance, where the line runs
 * through the path point along its tangent.
 */
inline double estimate_width(const PathTrack& track, std::size_t point_index,
                             const SparseHits& hits) {
  if (hits.empty()) {
    throw EmptyInput("estimate_width: no hits");
  }
  if (point_index >= track.size()) {
    throw InvalidArgument("estimate_width: point index out of range");
  }
  const Vec3 origin = track.points[point_index];
  const Vec3 direction = track.tangents[point_index].normalized();
  double best = std::numeric_limits<double>::infinity();
  for (const Vec3& hit : hits) {
    const Vec3 offset = hit - origin;
    const double d = (offset - offset.dot(direction) * direction).norm();
    if (d < best) best = d;
  }
  return best;
}

/// Per-path-point widths for the given mode. Mode 2 draws are seeded and
/// consumed in path order; Mode 3 widths are clamped to the mode's cap.
inline std::vector<double> make_mode_widths(const GenerationMode& mode,
                                            const PathTrack& track,
                                            std::uint64_t rng_seed) {
  validate(mode);
  std::vector<double> widths(track.size());
  if (const auto* m1 = std::get_if<FixedWidth>(&mode)) {
    for (double& w : widths) w = m1->w;
  } else if (const auto* m2 = std::get_if<RandomWidth>(&mode)) {
    RandomStream rng(rng_seed);
    for (double& w : widths) w = rng.uniform(m2->low, m2->high);
  } else {
    const auto& m3 = std::get<EstimatedWidth>(mode);
    for (std::size_t i = 0; i < track.size(); ++i) {
      widths[i] = std::min(estimate_width(track, i, m3.hits), m3.cap);
    }
  }
  return widths;
}

/**
 * Emit the central points: each path point itself plus points at
 * -floor(w)..+floor(w) meters along its normal. Candidates closer than
 * `dedup_radius` to an already-kept center are dropped (path-major,
 * offset-ascending order).
 */
inline std::vector<Vec3> centers_from_path(const PathTrack& track,
                                           const std::vector<double>& widths,
                                           double dedup_radius = 0.5) {
  if (widths.size() != track.size()) {
    throw InvalidArgument("centers_from_path: one width per path point required");
  }
  for (double w : widths) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw InvalidArgument("centers_from_path: widths must be finite and >= 0");
    }
  }

  // Grid hash for the dedup query; cell size = dedup radius, so any kept
  // center within the radius lies in one of the 27 surrounding cells.
  std::unordered_map<VoxelKey, std::vector<std::size_t>, VoxelKeyHash> cells;
  std::vector<Vec3> kept;
  const double r2 = dedup_radius * dedup_radius;
  auto try_keep = [&](const Vec3& candidate) {
    if (dedup_radius > 0.0) {
      const VoxelKey base = voxel_key(candidate, dedup_radius);
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          for (std::int64_t dz = -1; dz <= 1; ++dz) {
            const auto it = cells.find({base.x + dx, base.y + dy, base.z + dz});
            if (it == cells.end()) continue;
            for (std::size_t k : it->second) {
              if ((kept[k] - candidate).squaredNorm() < r2) return;
            }
          }
        }
      }
      cells[base].push_back(kept.size());
    }
    kept.push_back(candidate);
  };

  for (std::size_t i = 0; i < track.size(); ++i) {
    const auto extent = static_cast<long>(std::floor(widths[i]));
    for (long j = -extent; j <= extent; ++j) {
      try_keep(track.points[i] + static_cast<double>(j) * track.normals[i]);
    }
  }
  return kept;
}

}  // namespace gdm

#endif  // GDM_STAGE1_CENTERS_HPP
