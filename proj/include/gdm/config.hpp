// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Run configuration for the command-line tool. Serialized as JSON; every
// command writes its resolved configuration next to its outputs so a run
// can be reproduced from one file. Unknown keys are rejected.

#ifndef GDM_CONFIG_HPP
#define GDM_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdm/dataset/corridor.hpp"
#include "gdm/denoiser/loss.hpp"
#include "gdm/denoiser/network.hpp"
#include "gdm/diffusion/schedule.hpp"
#include "gdm/error.hpp"
#include "gdm/metrics/metrics.hpp"
#include "gdm/pipeline.hpp"

namespace gdm {

struct TrainingConfig {
  std::size_t epochs = 200;
  double step_size = 1e-3;
  double r = kDefaultLossWeight;
};

struct DatasetConfig {
  double block_length = 150.0;
  std::size_t target_points = 50000;
  std::size_t sparse_hits = 50;
  // Synthetic corridor corpus settings.
  std::size_t scenes = 64;
  CorridorSpec corridor;
};

struct Stage1Settings {
  std::string mode = "mode1";
  double width = 20.0;        // Mode 1; also the training corridor width
  double width_low = 15.0;    // Mode 2
  double width_high = 35.0;
  Stage1Config geometry;      // spacing, dedup, points_per_group, cap
};

struct RunConfig {
  ScheduleSpec schedule;
  ArchDescriptor arch;
  TrainingConfig training;
  Stage1Settings stage1;
  std::vector<double> eval_resolutions = kDefaultIouResolutions;
  DatasetConfig dataset;
  std::uint64_t seed = 0;
};

namespace detail {

inline void require_keys(const nlohmann::json& obj,
                         const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw InvalidArgument("config: unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void maybe_get(const nlohmann::json& obj, const char* key, T& out) {
  if (obj.contains(key)) {
    obj.at(key).get_to(out);
  }
}

}  // namespace detail

inline nlohmann::json to_json(const ScheduleSpec& s) {
  return {{"steps", s.steps}, {"beta_start", s.beta_start}, {"beta_end", s.beta_end}};
}

inline nlohmann::json to_json(const ArchDescriptor& a) {
  return {{"hidden", a.hidden},
          {"time_embed_dim", a.time_embed_dim},
          {"activation", to_string(a.activation)},
          {"knn_k", a.knn_k},
          {"center_scale", a.center_scale}};
}

inline nlohmann::json to_json(const RunConfig& c) {
  return {
      {"schedule", to_json(c.schedule)},
      {"arch", to_json(c.arch)},
      {"training",
       {{"epochs", c.training.epochs},
        {"step_size", c.training.step_size},
        {"r", c.training.r}}},
      {"stage1",
       {{"mode", c.stage1.mode},
        {"width", c.stage1.width},
        {"width_low", c.stage1.width_low},
        {"width_high", c.stage1.width_high},
        {"points_per_group", c.stage1.geometry.points_per_group},
        {"dedup_radius", c.stage1.geometry.dedup_radius},
        {"width_cap", c.stage1.geometry.width_cap},
        {"path_spacing", c.stage1.geometry.path_spacing}}},
      {"evaluation", {{"resolutions", c.eval_resolutions}}},
      {"dataset",
       {{"block_length", c.dataset.block_length},
        {"target_points", c.dataset.target_points},
        {"sparse_hits", c.dataset.sparse_hits},
        {"scenes", c.dataset.scenes},
        {"corridor",
         {{"points", c.dataset.corridor.points},
          {"path_length", c.dataset.corridor.path_length},
          {"half_width", c.dataset.corridor.half_width},
          {"placement_range", c.dataset.corridor.placement_range},
          {"heading_drift", c.dataset.corridor.heading_drift},
          {"ground_z", c.dataset.corridor.ground_z},
          {"undulation", c.dataset.corridor.undulation},
          {"undulation_wavelength", c.dataset.corridor.undulation_wavelength}}}}},
      {"seed", c.seed}};
}

inline void merge_from_json(RunConfig& c, const nlohmann::json& j) {
  detail::require_keys(j,
                       {"schedule", "arch", "training", "stage1", "evaluation",
                        "dataset", "seed"},
                       "top level");
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    detail::require_keys(s, {"steps", "beta_start", "beta_end"}, "schedule");
    detail::maybe_get(s, "steps", c.schedule.steps);
    detail::maybe_get(s, "beta_start", c.schedule.beta_start);
    detail::maybe_get(s, "beta_end", c.schedule.beta_end);
  }
  if (j.contains("arch")) {
    const auto& a = j.at("arch");
    detail::require_keys(
        a, {"hidden", "time_embed_dim", "activation", "knn_k", "center_scale"},
        "arch");
    detail::maybe_get(a, "hidden", c.arch.hidden);
    detail::maybe_get(a, "time_embed_dim", c.arch.time_embed_dim);
    if (a.contains("activation")) {
      c.arch.activation = activation_from_string(a.at("activation"));
    }
    detail::maybe_get(a, "knn_k", c.arch.knn_k);
    detail::maybe_get(a, "center_scale", c.arch.center_scale);
  }
  if (j.contains("training")) {
    const auto& t = j.at("training");
    detail::require_keys(t, {"epochs", "step_size", "r"}, "training");
    detail::maybe_get(t, "epochs", c.training.epochs);
    detail::maybe_get(t, "step_size", c.training.step_size);
    detail::maybe_get(t, "r", c.training.r);
  }
  if (j.contains("stage1")) {
    const auto& s = j.at("stage1");
    detail::require_keys(s,
                         {"mode", "width", "width_low", "width_high",
                          "points_per_group", "dedup_radius", "width_cap",
                          "path_spacing"},
                         "stage1");
    detail::maybe_get(s, "mode", c.stage1.mode);
    detail::maybe_get(s, "width", c.stage1.width);
    detail::maybe_get(s, "width_low", c.stage1.width_low);
    detail::maybe_get(s, "width_high", c.stage1.width_high);
    detail::maybe_get(s, "points_per_group", c.stage1.geometry.points_per_group);
    detail::maybe_get(s, "dedup_radius", c.stage1.geometry.dedup_radius);
    detail::maybe_get(s, "width_cap", c.stage1.geometry.width_cap);
    detail::maybe_get(s, "path_spacing", c.stage1.geometry.path_spacing);
  }
  if (j.contains("evaluation")) {
    const auto& e = j.at("evaluation");
    detail::require_keys(e, {"resolutions"}, "evaluation");
    detail::maybe_get(e, "resolutions", c.eval_resolutions);
  }
  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    detail::require_keys(
        d, {"block_length", "target_points", "sparse_hits", "scenes", "corridor"},
        "dataset");
    detail::maybe_get(d, "block_length", c.dataset.block_length);
    detail::maybe_get(d, "target_points", c.dataset.target_points);
    detail::maybe_get(d, "sparse_hits", c.dataset.sparse_hits);
    detail::maybe_get(d, "scenes", c.dataset.scenes);
    if (d.contains("corridor")) {
      const auto& k = d.at("corridor");
      detail::require_keys(k,
                           {"points", "path_length", "half_width",
                            "placement_range", "heading_drift", "ground_z",
                            "undulation", "undulation_wavelength"},
                           "dataset.corridor");
      detail::maybe_get(k, "points", c.dataset.corridor.points);
      detail::maybe_get(k, "path_length", c.dataset.corridor.path_length);
      detail::maybe_get(k, "half_width", c.dataset.corridor.half_width);
      detail::maybe_get(k, "placement_range", c.dataset.corridor.placement_range);
      detail::maybe_get(k, "heading_drift", c.dataset.corridor.heading_drift);
      detail::maybe_get(k, "ground_z", c.dataset.corridor.ground_z);
      detail::maybe_get(k, "undulation", c.dataset.corridor.undulation);
      detail::maybe_get(k, "undulation_wavelength",
                        c.dataset.corridor.undulation_wavelength);
    }
  }
  detail::maybe_get(j, "seed", c.seed);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path, 0, "cannot open config");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path, 0, e.what());
  }
  RunConfig config;
  merge_from_json(config, j);
  return config;
}

inline void write_resolved_config(const std::string& path, const RunConfig& c) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidArgument("cannot write resolved config to " + path);
  }
  out << to_json(c).dump(2) << "\n";
}

}  // namespace gdm

#endif  // GDM_CONFIG_HPP
