// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end workflows shared by the command-line tool and the test
// suites: training-map preparation, two-stage generation, and any-shape
// denoising. Training-time and generation-time group geometry match by
// construction: both derive their centers from the path corridor lattice.

#ifndef GDM_PIPELINE_HPP
#define GDM_PIPELINE_HPP

#include <cstddef>
#include <vector>

#include "gdm/denoiser/checkpoint.hpp"
#include "gdm/denoiser/network.hpp"
#include "gdm/diffusion/diffusion.hpp"
#include "gdm/diffusion/schedule.hpp"
#include "gdm/error.hpp"
#include "gdm/grouping.hpp"
#include "gdm/stage1/centers.hpp"
#include "gdm/stage1/path.hpp"

namespace gdm {

struct Stage1Config {
  double path_spacing = 1.0;   // arc-length resampling step
  double dedup_radius = 0.5;   // center deduplication radius
  std::size_t points_per_group = 5;
  double width_cap = 50.0;     // Mode 3 clamp

  void validate() const {
    if (!(path_spacing > 0.0)) {
      throw InvalidArgument("Stage1Config: path_spacing must be > 0");
    }
    if (dedup_radius < 0.0) {
      throw InvalidArgument("Stage1Config: negative dedup radius");
    }
    if (points_per_group < 1) {
      throw InvalidArgument("Stage1Config: points_per_group must be >= 1");
    }
  }
};

/// Path -> resampled track -> corridor centers for the given mode.
inline std::vector<Vec3> stage1_centers(const std::vector<Vec3>& path_points,
                                        const GenerationMode& mode,
                                        const Stage1Config& cfg,
                                        std::uint64_t rng_seed) {
  cfg.validate();
  const PathTrack track =
      estimate_tangents_normals(resample_arclength(path_points, cfg.path_spacing));
  GenerationMode effective = mode;
  if (auto* m3 = std::get_if<EstimatedWidth>(&effective)) {
    m3->cap = cfg.width_cap;
  }
  const std::vector<double> widths = make_mode_widths(effective, track, rng_seed);
  return centers_from_path(track, widths, cfg.dedup_radius);
}

/**
 * Prepare one training map: corridor centers from the scene's own path
 * (fixed width), Voronoi assignment, empty groups dropped, and centers
 * replaced by the data-derived group centroids.
 */
inline GroupedMap prepare_training_map(const PointCloud& cloud,
                                       const std::vector<Vec3>& path_points,
                                       double width, const Stage1Config& cfg) {
  const std::vector<Vec3> centers =
      stage1_centers(path_points, FixedWidth{width}, cfg, /*rng_seed=*/0);
  const GroupedMap assigned = assign_groups(cloud, centers);
  return recenter_on_centroids(drop_empty_groups(assigned));
}

struct GenerationResult {
  PointCloud generated;       // P_0
  PointCloud initial;         // P_T, before any denoising
  std::vector<Vec3> centers;  // stage-1 central points
};

/**
 * Two-stage generation: stage-1 centers for the mode, P_T = C + eps, then
 * the reverse chain under the checkpoint's schedule. Deterministic in seed.
 */
inline GenerationResult generate_map(const std::vector<Vec3>& path_points,
                                     const GenerationMode& mode,
                                     const Checkpoint& ckpt,
                                     const Stage1Config& cfg,
                                     std::uint64_t seed) {
  const NoiseSchedule schedule = build_schedule(ckpt.schedule);
  RandomStream root(seed);
  const std::uint64_t width_seed = root.derive(1).next_u64();
  const std::uint64_t init_seed = root.derive(2).next_u64();
  const std::uint64_t chain_seed = root.derive(3).next_u64();

  GenerationResult result;
  result.centers = stage1_centers(path_points, mode, cfg, width_seed);
  NoisyMapState state = init_noisy_map(result.centers, cfg.points_per_group,
                                       init_seed, schedule.steps());
  result.initial = state.flatten();
  auto denoiser = [&](const NoisyMapState& s) {
    return predict_noise(ckpt.params, s);
  };
  run_reverse_chain(state, denoiser, schedule, chain_seed);
  result.generated = state.flatten();
  return result;
}

/**
 * Any-shape denoising: treat a noisy cloud with known centers as the
 * state at timestep t_start (default: the full chain length) and run the
 * reverse chain. Points are grouped by nearest center.
 */
inline PointCloud denoise_cloud(const PointCloud& noisy,
                                const std::vector<Vec3>& centers,
                                const Checkpoint& ckpt, std::uint64_t seed,
                                std::size_t t_start = 0) {
  const NoiseSchedule schedule = build_schedule(ckpt.schedule);
  if (t_start == 0) {
    t_start = schedule.steps();
  }
  if (t_start > schedule.steps()) {
    throw InvalidArgument("denoise_cloud: t_start beyond schedule");
  }
  const GroupedMap grouped = assign_groups(noisy, centers);

  NoisyMapState state;
  state.timestep = t_start;
  state.centers = grouped.centers;
  state.groups.reserve(grouped.groups.size());
  for (const auto& group : grouped.groups) {
    std::vector<Vec3> pts;
    pts.reserve(group.size());
    for (std::size_t idx : group) {
      pts.push_back(grouped.parent[idx]);
    }
    state.groups.push_back(std::move(pts));
  }

  auto denoiser = [&](const NoisyMapState& s) {
    return predict_noise(ckpt.params, s);
  };
  run_reverse_chain(state, denoiser, schedule, RandomStream(seed).next_u64());
  return state.flatten();
}

}  // namespace gdm

#endif  // GDM_PIPELINE_HPP
