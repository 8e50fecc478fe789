// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// The noise-prediction network: a per-point multilayer perceptron over
// (centered coordinates, owning-group center, sinusoidal time embedding,
// k-nearest-neighbor mean offset). One forward call covers the whole map,
// so the prediction is a batched matrix pipeline.

#ifndef GDM_DENOISER_NETWORK_HPP
#define GDM_DENOISER_NETWORK_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gdm/core/spatial_index.hpp"
#include "gdm/diffusion/diffusion.hpp"
#include "gdm/error.hpp"
#include "gdm/rng.hpp"

namespace gdm {

enum class Activation : std::uint32_t { Tanh = 0, Relu = 1 };

inline std::string to_string(Activation a) {
  return a == Activation::Tanh ? "tanh" : "relu";
}

inline Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  throw InvalidArgument("unknown activation: " + name);
}

/**
 * Immutable architecture descriptor. Input features per point are
 * (g, C * center_scale, knn mean offset, time embedding), in that order.
 */
struct ArchDescriptor {
  std::vector<std::uint32_t> hidden = {64, 64};
  std::uint32_t time_embed_dim = 16;
  Activation activation = Activation::Tanh;
  std::uint32_t knn_k = 8;
  double center_scale = 0.01;

  bool operator==(const ArchDescriptor&) const = default;

  std::size_t feature_dim() const { return 9 + time_embed_dim; }
  static constexpr std::size_t output_dim() { return 3; }

  /// Layer sizes from input to output: [F, hidden..., 3].
  std::vector<std::size_t> layer_dims() const {
    std::vector<std::size_t> dims;
    dims.push_back(feature_dim());
    for (std::uint32_t h : hidden) dims.push_back(h);
    dims.push_back(output_dim());
    return dims;
  }

  void validate() const {
    if (time_embed_dim < 2 || time_embed_dim % 2 != 0) {
      throw InvalidArgument("time_embed_dim must be even and >= 2");
    }
    for (std::uint32_t h : hidden) {
      if (h == 0) throw InvalidArgument("hidden width must be >= 1");
    }
  }
};

/// Sinusoidal encoding of the integer timestep, deterministic in t.
struct TimeEmbedding {
  std::uint32_t dim;
  Eigen::VectorXd frequencies;

  explicit TimeEmbedding(std::uint32_t dimension) : dim(dimension) {
    if (dim < 2 || dim % 2 != 0) {
      throw InvalidArgument("TimeEmbedding: dim must be even and >= 2");
    }
    const std::uint32_t half = dim / 2;
    frequencies.resize(half);
    for (std::uint32_t j = 0; j < half; ++j) {
      const double exponent =
          half == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(half - 1);
      frequencies[j] = std::exp(-std::log(10000.0) * exponent);
    }
  }

  Eigen::VectorXd embed(std::size_t t) const {
    Eigen::VectorXd out(dim);
    const std::uint32_t half = dim / 2;
    for (std::uint32_t j = 0; j < half; ++j) {
      const double arg = static_cast<double>(t) * frequencies[j];
      out[j] = std::sin(arg);
      out[half + j] = std::cos(arg);
    }
    return out;
  }
};

/// Weights and biases of the fixed-architecture per-point network.
struct DenoiserParams {
  ArchDescriptor arch;
  std::vector<Eigen::MatrixXd> weights;  // weights[l]: dims[l+1] x dims[l]
  std::vector<Eigen::VectorXd> biases;   // biases[l]:  dims[l+1]

  std::size_t layer_count() const { return weights.size(); }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
      n += static_cast<std::size_t>(weights[l].size()) +
           static_cast<std::size_t>(biases[l].size());
    }
    return n;
  }

  void validate() const {
    arch.validate();
    const auto dims = arch.layer_dims();
    if (weights.size() != dims.size() - 1 || biases.size() != weights.size()) {
      throw InvalidArgument("DenoiserParams: layer count mismatch");
    }
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      if (weights[l].rows() != static_cast<Eigen::Index>(dims[l + 1]) ||
          weights[l].cols() != static_cast<Eigen::Index>(dims[l]) ||
          biases[l].size() != static_cast<Eigen::Index>(dims[l + 1])) {
        throw InvalidArgument("DenoiserParams: layer " + std::to_string(l) +
                              " shape mismatch");
      }
      if (!weights[l].allFinite() || !biases[l].allFinite()) {
        throw InvalidArgument("DenoiserParams: non-finite parameter");
      }
    }
  }
};

/// Zero-initialized parameters for the given architecture.
inline DenoiserParams zero_params(const ArchDescriptor& arch) {
  arch.validate();
  DenoiserParams p;
  p.arch = arch;
  const auto dims = arch.layer_dims();
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    p.weights.emplace_back(Eigen::MatrixXd::Zero(dims[l + 1], dims[l]));
    p.biases.emplace_back(Eigen::VectorXd::Zero(dims[l + 1]));
  }
  return p;
}

/// Seeded Glorot-uniform initialization.
inline DenoiserParams init_params(const ArchDescriptor& arch, std::uint64_t seed) {
  DenoiserParams p = zero_params(arch);
  RandomStream rng(seed);
  const auto dims = arch.layer_dims();
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
    for (Eigen::Index r = 0; r < p.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < p.weights[l].cols(); ++c) {
        p.weights[l](r, c) = rng.uniform(-bound, bound);
      }
    }
  }
  return p;
}

namespace detail {

// tanh through the vectorizable exp kernel: (e^{2x} - 1) / (e^{2x} + 1),
// input clamped where tanh is 1.0 to double precision anyway.
inline Eigen::MatrixXd vectorized_tanh(const Eigen::MatrixXd& a) {
  const auto x = a.array().min(19.0).max(-19.0);
  const Eigen::ArrayXXd t = (2.0 * x).exp();
  return ((t - 1.0) / (t + 1.0)).matrix();
}

inline Eigen::MatrixXd apply_activation(const Eigen::MatrixXd& a, Activation act) {
  if (act == Activation::Tanh) {
    return vectorized_tanh(a);
  }
  return a.cwiseMax(0.0);
}

/// Derivative expressed through the activation output h = act(a):
/// tanh' = 1 - h^2, relu' = [h > 0]. Avoids re-evaluating tanh.
inline Eigen::MatrixXd activation_derivative_from_output(
    const Eigen::MatrixXd& h, Activation act) {
  if (act == Activation::Tanh) {
    return 1.0 - h.array().square();
  }
  return (h.array() > 0.0).cast<double>();
}

}  // namespace detail

/**
 * Per-point feature matrix for one map state: row i describes point i in the
 * group-major flattening. Columns: g (3), C * center_scale (3), knn mean
 * offset (3), time embedding (arch.time_embed_dim).
 */
inline Eigen::MatrixXd build_features(const ArchDescriptor& arch,
                                      const NoisyMapState& state) {
  if (state.timestep < 1) {
    throw InvalidArgument("build_features: state must sit at t >= 1");
  }
  if (state.groups.size() != state.centers.size()) {
    throw InvalidArgument("build_features: group/center mismatch");
  }
  const PointCloud flat = state.flatten();
  const std::size_t n = flat.size();
  if (n == 0) {
    throw EmptyInput("build_features: empty map state");
  }

  const SpatialIndex index(flat);
  const TimeEmbedding temb(arch.time_embed_dim);
  const Eigen::VectorXd t_vec = temb.embed(state.timestep);

  Eigen::MatrixXd features(n, arch.feature_dim());
  std::size_t row = 0;
  for (std::size_t i = 0; i < state.groups.size(); ++i) {
    for (const Vec3& p : state.groups[i]) {
      const Vec3 g = p - state.centers[i];
      Vec3 knn_offset = Vec3::Zero();
      if (n > 1) {
        // k+1 nearest includes the query point itself; skip it by index.
        const auto neighbors = index.k_nearest(p, arch.knn_k + 1);
        std::size_t used = 0;
        for (const Neighbor& nb : neighbors) {
          if (nb.index == row) continue;
          knn_offset += index.point(nb.index) - p;
          if (++used == arch.knn_k) break;
        }
        if (used > 0) knn_offset /= static_cast<double>(used);
      }
      features.block<1, 3>(row, 0) = g.transpose();
      features.block<1, 3>(row, 3) = (arch.center_scale * state.centers[i]).transpose();
      features.block<1, 3>(row, 6) = knn_offset.transpose();
      features.block(row, 9, 1, arch.time_embed_dim) = t_vec.transpose();
      ++row;
    }
  }
  return features;
}

/// Cached intermediate results of one batched forward pass.
struct ForwardCache {
  Eigen::MatrixXd input;                     // N x F
  std::vector<Eigen::MatrixXd> activations;  // per hidden layer output
  Eigen::MatrixXd output;                    // N x 3
};

inline ForwardCache forward_pass(const DenoiserParams& params,
                                 const Eigen::MatrixXd& features) {
  params.validate();
  if (features.cols() != static_cast<Eigen::Index>(params.arch.feature_dim())) {
    throw InvalidArgument("forward_pass: feature dimensionality mismatch");
  }
  ForwardCache cache;
  cache.input = features;
  const std::size_t layers = params.layer_count();
  const Eigen::MatrixXd* below = &cache.input;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd a;
    a.noalias() = (*below) * params.weights[l].transpose();
    a.rowwise() += params.biases[l].transpose();
    if (l + 1 < layers) {
      cache.activations.push_back(
          detail::apply_activation(a, params.arch.activation));
      below = &cache.activations.back();
    } else {
      cache.output = std::move(a);  // linear output layer
    }
  }
  return cache;
}

/// Predicted noise, one 3-vector per point, group-major order.
inline std::vector<Vec3> predict_noise(const DenoiserParams& params,
                                       const NoisyMapState& state) {
  const Eigen::MatrixXd features = build_features(params.arch, state);
  const ForwardCache cache = forward_pass(params, features);
  std::vector<Vec3> out;
  out.reserve(cache.output.rows());
  for (Eigen::Index i = 0; i < cache.output.rows(); ++i) {
    out.emplace_back(cache.output(i, 0), cache.output(i, 1), cache.output(i, 2));
  }
  return out;
}

}  // namespace gdm

#endif  // GDM_DENOISER_NETWORK_HPP
