// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Per-group forward diffusion, reverse denoising steps, and the full
// sampling chain. World-frame maps are normalized into per-group centered
// coordinates, diffused there, and transformed back.

#ifndef GDM_DIFFUSION_DIFFUSION_HPP
#define GDM_DIFFUSION_DIFFUSION_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/diffusion/schedule.hpp"
#include "gdm/error.hpp"
#include "gdm/grouping.hpp"
#include "gdm/rng.hpp"

namespace gdm {

/**
 * Snapshot of the grouped map at one timestep of the chain. Points are kept
 * in world frame, grouped; `noise` holds the per-point epsilon that produced
 * this state when it came from the forward process (empty otherwise).
 */
struct NoisyMapState {
  std::size_t timestep = 0;
  std::vector<std::vector<Vec3>> groups;
  std::vector<Vec3> centers;
  std::vector<std::vector<Vec3>> noise;

  std::size_t total_points() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    return n;
  }

  /// Group-major flattening, matching denormalize() ordering.
  PointCloud flatten() const {
    std::vector<Vec3> pts;
    pts.reserve(total_points());
    for (const auto& g : groups) {
      pts.insert(pts.end(), g.begin(), g.end());
    }
    return PointCloud(std::move(pts));
  }

  std::vector<Vec3> flatten_noise() const {
    std::vector<Vec3> e;
    e.reserve(total_points());
    for (const auto& g : noise) {
      e.insert(e.end(), g.begin(), g.end());
    }
    return e;
  }
};

/// g_t = sqrt(alpha_bar_t) * g_0 + sqrt(1 - alpha_bar_t) * eps, per point.
inline std::vector<Vec3> forward_diffuse_group(const std::vector<Vec3>& g0,
                                               std::size_t t,
                                               const std::vector<Vec3>& eps,
                                               const NoiseSchedule& schedule) {
  if (!schedule.valid_timestep(t)) {
    throw InvalidArgument("forward_diffuse_group: t out of [1, T]");
  }
  if (eps.size() != g0.size()) {
    throw InvalidArgument("forward_diffuse_group: eps shape mismatch");
  }
  const double ab = schedule.alpha_bar_at(t);
  const double signal = std::sqrt(ab);
  const double spread = std::sqrt(1.0 - ab);
  std::vector<Vec3> gt;
  gt.reserve(g0.size());
  for (std::size_t i = 0; i < g0.size(); ++i) {
    gt.push_back(signal * g0[i] + spread * eps[i]);
  }
  return gt;
}

/// Inversion of the forward formula: g_0 = (g_t - sqrt(1-ab_t) eps) / sqrt(ab_t).
inline std::vector<Vec3> predict_x0(const std::vector<Vec3>& gt, std::size_t t,
                                    const std::vector<Vec3>& eps,
                                    const NoiseSchedule& schedule) {
  if (!schedule.valid_timestep(t)) {
    throw InvalidArgument("predict_x0: t out of [1, T]");
  }
  if (eps.size() != gt.size()) {
    throw InvalidArgument("predict_x0: eps shape mismatch");
  }
  const double ab = schedule.alpha_bar_at(t);
  if (ab == 0.0) {
    throw DegenerateSchedule("predict_x0: alpha_bar(t) is zero");
  }
  const double signal = std::sqrt(ab);
  const double spread = std::sqrt(1.0 - ab);
  std::vector<Vec3> g0;
  g0.reserve(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    g0.push_back((gt[i] - spread * eps[i]) / signal);
  }
  return g0;
}

/**
 * One reverse step in centered coordinates:
 *   g_{t-1} = (g_t - beta_t / sqrt(1 - alpha_bar_t) * eps_pred) / sqrt(alpha_t)
 *             + sqrt(beta_t) * z
 * The final step is deterministic: z must be zero when t == 1.
 */
inline std::vector<Vec3> reverse_step(const std::vector<Vec3>& gt, std::size_t t,
                                      const std::vector<Vec3>& eps_pred,
                                      const std::vector<Vec3>& z,
                                      const NoiseSchedule& schedule) {
  if (!schedule.valid_timestep(t)) {
    throw InvalidArgument("reverse_step: t out of [1, T]");
  }
  if (eps_pred.size() != gt.size() || z.size() != gt.size()) {
    throw InvalidArgument("reverse_step: shape mismatch");
  }
  if (t == 1) {
    for (const Vec3& v : z) {
      if (v != Vec3::Zero()) {
        throw InvalidArgument("reverse_step: z must be zero at t = 1");
      }
    }
  }
  const double beta = schedule.beta_at(t);
  const double inv_sqrt_alpha = 1.0 / std::sqrt(schedule.alpha_at(t));
  const double eps_scale = beta / std::sqrt(1.0 - schedule.alpha_bar_at(t));
  const double z_scale = std::sqrt(beta);
  std::vector<Vec3> prev;
  prev.reserve(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    prev.push_back(inv_sqrt_alpha * (gt[i] - eps_scale * eps_pred[i]) +
                   z_scale * z[i]);
  }
  return prev;
}

/**
 * Forward-diffuse a whole grouped map to timestep t: normalize each group,
 * apply the forward formula with freshly sampled Gaussian noise, and map
 * back to world frame. The sampled noise is recorded in the returned state.
 * Deterministic given rng_seed; noise is drawn in group-major point order.
 */
inline NoisyMapState forward_diffuse_map(const GroupedMap& map, std::size_t t,
                                         std::uint64_t rng_seed,
                                         const NoiseSchedule& schedule) {
  if (!schedule.valid_timestep(t)) {
    throw InvalidArgument("forward_diffuse_map: t out of [1, T]");
  }
  const NormalizedGroups centered = normalize(map);
  RandomStream rng(rng_seed);

  NoisyMapState state;
  state.timestep = t;
  state.centers = map.centers;
  state.groups.reserve(centered.groups.size());
  state.noise.reserve(centered.groups.size());
  for (std::size_t i = 0; i < centered.groups.size(); ++i) {
    std::vector<Vec3> eps;
    eps.reserve(centered.groups[i].size());
    for (std::size_t j = 0; j < centered.groups[i].size(); ++j) {
      eps.emplace_back(rng.normal(), rng.normal(), rng.normal());
    }
    std::vector<Vec3> gt = forward_diffuse_group(centered.groups[i], t, eps, schedule);
    for (Vec3& g : gt) {
      g += map.centers[i];
    }
    state.groups.push_back(std::move(gt));
    state.noise.push_back(std::move(eps));
  }
  return state;
}

/// P_T = C + eps: each group starts as points_per_group Gaussian samples
/// around its center. State is tagged with the chain length T.
inline NoisyMapState init_noisy_map(const std::vector<Vec3>& centers,
                                    std::size_t points_per_group,
                                    std::uint64_t rng_seed, std::size_t T) {
  if (centers.empty()) {
    throw EmptyInput("init_noisy_map: no centers");
  }
  if (points_per_group < 1) {
    throw InvalidArgument("init_noisy_map: points_per_group must be >= 1");
  }
  RandomStream rng(rng_seed);
  NoisyMapState state;
  state.timestep = T;
  state.centers = centers;
  state.groups.reserve(centers.size());
  for (const Vec3& c : centers) {
    std::vector<Vec3> group;
    group.reserve(points_per_group);
    for (std::size_t j = 0; j < points_per_group; ++j) {
      group.push_back(c + Vec3(rng.normal(), rng.normal(), rng.normal()));
    }
    state.groups.push_back(std::move(group));
  }
  return state;
}

/**
 * Run the reverse chain from the state's timestep down to 0, in place.
 * The denoiser is evaluated once per timestep on the whole map and must
 * return one predicted-noise vector per point in group-major order.
 */
template <typename DenoiseFn>
inline void run_reverse_chain(NoisyMapState& state, DenoiseFn&& denoiser,
                              const NoiseSchedule& schedule,
                              std::uint64_t rng_seed) {
  if (state.timestep > schedule.steps()) {
    throw InvalidArgument("run_reverse_chain: state timestep beyond schedule");
  }
  RandomStream rng(rng_seed);
  for (std::size_t t = state.timestep; t >= 1; --t) {
    const std::vector<Vec3> eps_pred = denoiser(state);
    if (eps_pred.size() != state.total_points()) {
      throw InvalidArgument("run_reverse_chain: denoiser output size mismatch");
    }
    std::size_t offset = 0;
    for (std::size_t i = 0; i < state.groups.size(); ++i) {
      auto& group = state.groups[i];
      std::vector<Vec3> g(group.size());
      std::vector<Vec3> pred(group.size());
      std::vector<Vec3> z(group.size(), Vec3::Zero());
      for (std::size_t j = 0; j < group.size(); ++j) {
        g[j] = group[j] - state.centers[i];
        pred[j] = eps_pred[offset + j];
        if (t > 1) {
          z[j] = Vec3(rng.normal(), rng.normal(), rng.normal());
        }
      }
      const std::vector<Vec3> prev = reverse_step(g, t, pred, z, schedule);
      for (std::size_t j = 0; j < group.size(); ++j) {
        group[j] = state.centers[i] + prev[j];
      }
      offset += group.size();
    }
    state.timestep = t - 1;
    state.noise.clear();
  }
}

/**
 * Full generation path: initialize P_T = C + eps and run the reverse chain.
 * Deterministic given rng_seed. Returns P_0 group-major.
 */
template <typename DenoiseFn>
inline PointCloud sample_map(const std::vector<Vec3>& centers,
                             std::size_t points_per_group, DenoiseFn&& denoiser,
                             const NoiseSchedule& schedule,
                             std::uint64_t rng_seed) {
  RandomStream root(rng_seed);
  const std::uint64_t init_seed = root.derive(1).next_u64();
  const std::uint64_t chain_seed = root.derive(2).next_u64();
  NoisyMapState state =
      init_noisy_map(centers, points_per_group, init_seed, schedule.steps());
  run_reverse_chain(state, std::forward<DenoiseFn>(denoiser), schedule, chain_seed);
  return state.flatten();
}

}  // namespace gdm

#endif  // GDM_DIFFUSION_DIFFUSION_HPP
