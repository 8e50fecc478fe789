// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GDM_DIFFUSION_SCHEDULE_HPP
#define GDM_DIFFUSION_SCHEDULE_HPP

#include <cstddef>
#include <vector>

#include "gdm/error.hpp"

namespace gdm {

/**
 * Noise-factor tables over T timesteps: beta_t, alpha_t = 1 - beta_t and
 * alpha_bar_t = prod_{i<=t} alpha_i. Timesteps are 1-based; accessors take
 * t in [1, T].
 */
struct NoiseSchedule {
  std::vector<double> beta;
  std::vector<double> alpha;
  std::vector<double> alpha_bar;

  std::size_t steps() const { return beta.size(); }

  double beta_at(std::size_t t) const { return beta.at(t - 1); }
  double alpha_at(std::size_t t) const { return alpha.at(t - 1); }
  double alpha_bar_at(std::size_t t) const { return alpha_bar.at(t - 1); }

  bool valid_timestep(std::size_t t) const { return t >= 1 && t <= steps(); }
};

/// Default step count and beta range (linear schedule).
inline constexpr std::size_t kDefaultSteps = 1000;
inline constexpr double kDefaultBetaStart = 1e-4;
inline constexpr double kDefaultBetaEnd = 0.02;

/// The three numbers that pin a linear schedule down; stored in configs and
/// checkpoints so that runs can verify they agree.
struct ScheduleSpec {
  std::size_t steps = kDefaultSteps;
  double beta_start = kDefaultBetaStart;
  double beta_end = kDefaultBetaEnd;

  bool operator==(const ScheduleSpec&) const = default;
};

/**
 * Linear beta schedule over T steps; alpha and alpha_bar derived exactly.
 * Requires T >= 1 and 0 < beta_start <= beta_end < 1.
 */
inline NoiseSchedule build_schedule(std::size_t T,
                                    double beta_start = kDefaultBetaStart,
                                    double beta_end = kDefaultBetaEnd) {
  if (T < 1) {
    throw InvalidArgument("build_schedule: T must be >= 1");
  }
  if (!(beta_start > 0.0) || !(beta_start <= beta_end) || !(beta_end < 1.0)) {
    throw InvalidArgument("build_schedule: need 0 < beta_start <= beta_end < 1");
  }
  NoiseSchedule s;
  s.beta.resize(T);
  s.alpha.resize(T);
  s.alpha_bar.resize(T);
  double running = 1.0;
  for (std::size_t i = 0; i < T; ++i) {
    const double frac = T == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(T - 1);
    s.beta[i] = beta_start + (beta_end - beta_start) * frac;
    s.alpha[i] = 1.0 - s.beta[i];
    running *= s.alpha[i];
    s.alpha_bar[i] = running;
  }
  return s;
}

inline NoiseSchedule build_schedule(const ScheduleSpec& spec) {
  return build_schedule(spec.steps, spec.beta_start, spec.beta_end);
}

}  // namespace gdm

#endif  // GDM_DIFFUSION_SCHEDULE_HPP
