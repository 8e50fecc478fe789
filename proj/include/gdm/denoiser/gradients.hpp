// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Analytic gradients of the training loss with respect to every network
// parameter, via reverse-mode differentiation through the batched forward
// pass. Input features are constants of the step, so the chain stops at the
// first layer's weights.

#ifndef GDM_DENOISER_GRADIENTS_HPP
#define GDM_DENOISER_GRADIENTS_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "gdm/denoiser/loss.hpp"
#include "gdm/denoiser/network.hpp"
#include "gdm/error.hpp"

namespace gdm {

struct DenoiserGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

struct GradientResult {
  LossReport report;
  DenoiserGradients grads;
};

namespace detail {

/// d total / d prediction, one row per point.
/// When the prediction spread is exactly zero, sigma is not differentiable;
/// the std term's contribution is taken as zero there.
inline Eigen::MatrixXd loss_gradient_wrt_prediction(
    const Eigen::MatrixXd& pred, const std::vector<Vec3>& eps_true, double r) {
  const Eigen::Index n = pred.rows();
  const double m = 3.0 * static_cast<double>(n);

  Eigen::MatrixXd grad(n, 3);
  double mean = pred.sum() / m;
  double var = (pred.array() - mean).square().sum() / m;
  const double sigma = std::sqrt(var);

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < 3; ++c) {
      const double diff = pred(i, c) - eps_true[i][c];
      double g = 2.0 * diff / static_cast<double>(n);  // l_mse term
      g += r * 2.0 * mean / m;                         // l_mean term
      if (sigma > 0.0) {
        g += r * 2.0 * (sigma - 1.0) * (pred(i, c) - mean) / (m * sigma);
      }
      grad(i, c) = g;
    }
  }
  return grad;
}

}  // namespace detail

/**
 * Loss and its exact analytic gradients for one map state. eps_true must be
 * the group-major per-point noise that produced the state.
 */
inline GradientResult loss_gradients(const DenoiserParams& params,
                                     const NoisyMapState& state,
                                     const std::vector<Vec3>& eps_true,
                                     double r = kDefaultLossWeight) {
  if (eps_true.size() != state.total_points()) {
    throw InvalidArgument("loss_gradients: eps_true size mismatch");
  }
  const Eigen::MatrixXd features = build_features(params.arch, state);
  const ForwardCache cache = forward_pass(params, features);

  std::vector<Vec3> pred_vec;
  pred_vec.reserve(cache.output.rows());
  for (Eigen::Index i = 0; i < cache.output.rows(); ++i) {
    pred_vec.emplace_back(cache.output(i, 0), cache.output(i, 1), cache.output(i, 2));
  }

  GradientResult result;
  result.report = loss(eps_true, pred_vec, r);
  if (!std::isfinite(result.report.total)) {
    throw NumericalError("loss_gradients: non-finite loss");
  }

  const std::size_t layers = params.layer_count();
  result.grads.weights.resize(layers);
  result.grads.biases.resize(layers);

  // delta = d total / d preactivation of the current layer.
  Eigen::MatrixXd delta =
      detail::loss_gradient_wrt_prediction(cache.output, eps_true, r);
  for (std::size_t l = layers; l-- > 0;) {
    const Eigen::MatrixXd& below =
        l == 0 ? cache.input : cache.activations[l - 1];
    result.grads.weights[l].noalias() = delta.transpose() * below;
    result.grads.biases[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      Eigen::MatrixXd upstream;
      upstream.noalias() = delta * params.weights[l];
      delta = upstream.cwiseProduct(detail::activation_derivative_from_output(
          cache.activations[l - 1], params.arch.activation));
    }
  }

  for (std::size_t l = 0; l < layers; ++l) {
    if (!result.grads.weights[l].allFinite() ||
        !result.grads.biases[l].allFinite()) {
      throw NumericalError("loss_gradients: non-finite gradient");
    }
  }
  return result;
}

}  // namespace gdm

#endif  // GDM_DENOISER_GRADIENTS_HPP
