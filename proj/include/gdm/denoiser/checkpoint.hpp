// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Checkpoint file: little-endian binary, magic "GDMC", u32 version, the
// architecture descriptor, the schedule settings the model was trained
// under, and the raw f64 parameter payload. Round-trips bit-exactly.

#ifndef GDM_DENOISER_CHECKPOINT_HPP
#define GDM_DENOISER_CHECKPOINT_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "gdm/denoiser/network.hpp"
#include "gdm/diffusion/schedule.hpp"
#include "gdm/error.hpp"

namespace gdm {

static_assert(std::endian::native == std::endian::little,
              "checkpoint io assumes a little-endian host");

inline constexpr char kCheckpointMagic[4] = {'G', 'D', 'M', 'C'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  DenoiserParams params;
  ScheduleSpec schedule;
};

namespace detail {

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in, const std::string& path) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) {
    throw ParseError(path, 0, "truncated checkpoint");
  }
  return value;
}

}  // namespace detail

inline void save_params(const std::string& path, const DenoiserParams& params,
                        const ScheduleSpec& schedule) {
  params.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidArgument("save_params: cannot open " + path);
  }
  out.write(kCheckpointMagic, 4);
  detail::write_raw(out, kCheckpointVersion);

  const ArchDescriptor& arch = params.arch;
  detail::write_raw(out, static_cast<std::uint32_t>(arch.hidden.size()));
  for (std::uint32_t h : arch.hidden) detail::write_raw(out, h);
  detail::write_raw(out, arch.time_embed_dim);
  detail::write_raw(out, static_cast<std::uint32_t>(arch.activation));
  detail::write_raw(out, arch.knn_k);
  detail::write_raw(out, arch.center_scale);

  detail::write_raw(out, static_cast<std::uint64_t>(schedule.steps));
  detail::write_raw(out, schedule.beta_start);
  detail::write_raw(out, schedule.beta_end);

  detail::write_raw(out, static_cast<std::uint64_t>(params.parameter_count()));
  for (std::size_t l = 0; l < params.layer_count(); ++l) {
    for (Eigen::Index r = 0; r < params.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < params.weights[l].cols(); ++c) {
        detail::write_raw(out, params.weights[l](r, c));
      }
    }
    for (Eigen::Index i = 0; i < params.biases[l].size(); ++i) {
      detail::write_raw(out, params.biases[l][i]);
    }
  }
  if (!out) {
    throw InvalidArgument("save_params: write failed for " + path);
  }
}

inline Checkpoint load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path, 0, "cannot open checkpoint");
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw ParseError(path, 0, "bad magic bytes");
  }
  const auto version = detail::read_raw<std::uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw IncompatibleCheckpoint("checkpoint version " + std::to_string(version) +
                                 ", expected " + std::to_string(kCheckpointVersion));
  }

  Checkpoint ckpt;
  ArchDescriptor& arch = ckpt.params.arch;
  const auto n_hidden = detail::read_raw<std::uint32_t>(in, path);
  if (n_hidden > 64) {
    throw ParseError(path, 0, "implausible hidden layer count");
  }
  arch.hidden.resize(n_hidden);
  for (std::uint32_t& h : arch.hidden) h = detail::read_raw<std::uint32_t>(in, path);
  arch.time_embed_dim = detail::read_raw<std::uint32_t>(in, path);
  const auto act = detail::read_raw<std::uint32_t>(in, path);
  if (act > 1) {
    throw ParseError(path, 0, "unknown activation id");
  }
  arch.activation = static_cast<Activation>(act);
  arch.knn_k = detail::read_raw<std::uint32_t>(in, path);
  arch.center_scale = detail::read_raw<double>(in, path);

  ckpt.schedule.steps = detail::read_raw<std::uint64_t>(in, path);
  ckpt.schedule.beta_start = detail::read_raw<double>(in, path);
  ckpt.schedule.beta_end = detail::read_raw<double>(in, path);

  ckpt.params = [&] {
    DenoiserParams p = zero_params(arch);
    const auto declared = detail::read_raw<std::uint64_t>(in, path);
    if (declared != p.parameter_count()) {
      throw ParseError(path, 0, "parameter count does not match architecture");
    }
    for (std::size_t l = 0; l < p.layer_count(); ++l) {
      for (Eigen::Index r = 0; r < p.weights[l].rows(); ++r) {
        for (Eigen::Index c = 0; c < p.weights[l].cols(); ++c) {
          p.weights[l](r, c) = detail::read_raw<double>(in, path);
        }
      }
      for (Eigen::Index i = 0; i < p.biases[l].size(); ++i) {
        p.biases[l][i] = detail::read_raw<double>(in, path);
      }
    }
    return p;
  }();
  return ckpt;
}

/// Guard used by pipelines before sampling with a loaded checkpoint.
inline void require_schedule_compatible(const Checkpoint& ckpt,
                                        const ScheduleSpec& configured) {
  if (!(ckpt.schedule == configured)) {
    throw IncompatibleCheckpoint(
        "checkpoint schedule (T=" + std::to_string(ckpt.schedule.steps) +
        ") does not match configured schedule (T=" +
        std::to_string(configured.steps) + ")");
  }
}

}  // namespace gdm

#endif  // GDM_DENOISER_CHECKPOINT_HPP
