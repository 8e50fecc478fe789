// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Training loop: one map per step, a uniformly drawn timestep, fresh noise,
// the regularized loss, and an adaptive-moment parameter update. The entire
// loop is a pure function of (dataset, config, seed).

#ifndef GDM_DENOISER_TRAIN_HPP
#define GDM_DENOISER_TRAIN_HPP

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "gdm/denoiser/gradients.hpp"
#include "gdm/denoiser/network.hpp"
#include "gdm/diffusion/diffusion.hpp"
#include "gdm/diffusion/schedule.hpp"
#include "gdm/error.hpp"
#include "gdm/grouping.hpp"
#include "gdm/rng.hpp"

namespace gdm {

struct TrainConfig {
  ArchDescriptor arch;
  ScheduleSpec schedule;
  std::size_t epochs = 200;
  double step_size = 1e-3;
  double r = kDefaultLossWeight;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  void validate() const {
    arch.validate();
    if (epochs < 1) throw InvalidArgument("TrainConfig: epochs must be >= 1");
    if (step_size < 0.0) throw InvalidArgument("TrainConfig: negative step size");
    if (r < 0.0) throw InvalidArgument("TrainConfig: negative r");
  }
};

struct TrainResult {
  DenoiserParams params;
  std::vector<double> loss_history;
};

namespace detail {

struct AdamState {
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;
  std::size_t step = 0;

  explicit AdamState(const DenoiserParams& params) {
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
      m_w.push_back(Eigen::MatrixXd::Zero(params.weights[l].rows(),
                                          params.weights[l].cols()));
      v_w.push_back(m_w.back());
      m_b.push_back(Eigen::VectorXd::Zero(params.biases[l].size()));
      v_b.push_back(m_b.back());
    }
  }

  void update(DenoiserParams& params, const DenoiserGradients& grads,
              const TrainConfig& cfg) {
    ++step;
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
      m_w[l] = cfg.adam_beta1 * m_w[l] + (1.0 - cfg.adam_beta1) * grads.weights[l];
      v_w[l] = cfg.adam_beta2 * v_w[l] +
               (1.0 - cfg.adam_beta2) * grads.weights[l].cwiseProduct(grads.weights[l]);
      params.weights[l].array() -=
          cfg.step_size * (m_w[l].array() / bc1) /
          ((v_w[l].array() / bc2).sqrt() + cfg.adam_epsilon);

      m_b[l] = cfg.adam_beta1 * m_b[l] + (1.0 - cfg.adam_beta1) * grads.biases[l];
      v_b[l] = cfg.adam_beta2 * v_b[l] +
               (1.0 - cfg.adam_beta2) * grads.biases[l].cwiseProduct(grads.biases[l]);
      params.biases[l].array() -=
          cfg.step_size * (m_b[l].array() / bc1) /
          ((v_b[l].array() / bc2).sqrt() + cfg.adam_epsilon);
    }
  }
};

}  // namespace detail

/**
 * Train the denoiser. Each dataset entry is a grouped map whose centers are
 * the data-derived centroids; empty groups must already be dropped. Returns
 * final parameters and the per-step loss trace.
 */
inline TrainResult train(const std::vector<GroupedMap>& dataset,
                         const TrainConfig& config, std::uint64_t seed) {
  if (dataset.empty()) {
    throw EmptyInput("train: empty dataset");
  }
  config.validate();
  const NoiseSchedule schedule = build_schedule(config.schedule);

  RandomStream root(seed);
  RandomStream init_rng = root.derive(0x494e4954);   // "INIT"
  RandomStream order_rng = root.derive(0x4f524452);  // "ORDR"
  RandomStream step_rng = root.derive(0x53544550);   // "STEP"

  TrainResult result;
  result.params = init_params(config.arch, init_rng.next_u64());
  detail::AdamState adam(result.params);
  result.loss_history.reserve(config.epochs * dataset.size());

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::size_t step_index = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.shuffle(order);
    for (std::size_t scene : order) {
      const std::size_t t = 1 + step_rng.index(schedule.steps());
      const std::uint64_t noise_seed = step_rng.next_u64();
      const NoisyMapState state =
          forward_diffuse_map(dataset[scene], t, noise_seed, schedule);
      const std::vector<Vec3> eps_true = state.flatten_noise();

      GradientResult grad;
      try {
        grad = loss_gradients(result.params, state, eps_true, config.r);
      } catch (const NumericalError& e) {
        throw TrainingDiverged(step_index, e.what());
      }
      if (!std::isfinite(grad.report.total)) {
        throw TrainingDiverged(step_index, "non-finite loss");
      }
      adam.update(result.params, grad.grads, config);
      result.loss_history.push_back(grad.report.total);
      ++step_index;
    }
  }
  return result;
}

}  // namespace gdm

#endif  // GDM_DENOISER_TRAIN_HPP
