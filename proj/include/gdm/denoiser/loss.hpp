// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Training loss: mean squared noise-prediction error plus regularizers that
// pull the predicted noise toward standard-normal statistics,
//   total = l_mse + r * (l_mean + l_std).
// The mean and standard deviation are taken over every scalar component of
// the predicted noise; the deviation is the population form.

#ifndef GDM_DENOISER_LOSS_HPP
#define GDM_DENOISER_LOSS_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/error.hpp"

namespace gdm {

inline constexpr double kDefaultLossWeight = 5.0;

struct LossReport {
  double l_mse = 0.0;
  double l_mean = 0.0;
  double l_std = 0.0;
  double total = 0.0;
  double r = kDefaultLossWeight;
};

inline LossReport loss(const std::vector<Vec3>& eps_true,
                       const std::vector<Vec3>& eps_pred,
                       double r = kDefaultLossWeight) {
  if (eps_true.empty()) {
    throw EmptyInput("loss: no points");
  }
  if (eps_true.size() != eps_pred.size()) {
    throw InvalidArgument("loss: shape mismatch");
  }
  if (r < 0.0) {
    throw InvalidArgument("loss: r must be >= 0");
  }
  const std::size_t n = eps_true.size();
  const double m = 3.0 * static_cast<double>(n);

  double sq_err = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sq_err += (eps_true[i] - eps_pred[i]).squaredNorm();
    sum += eps_pred[i].sum();
  }
  const double mean = sum / m;

  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    var += (eps_pred[i].array() - mean).square().sum();
  }
  var /= m;

  LossReport report;
  report.r = r;
  report.l_mse = sq_err / static_cast<double>(n);
  report.l_mean = mean * mean;
  const double sigma = std::sqrt(var);
  report.l_std = (sigma - 1.0) * (sigma - 1.0);
  report.total = report.l_mse + r * (report.l_mean + report.l_std);
  return report;
}

}  // namespace gdm

#endif  // GDM_DENOISER_LOSS_HPP
