// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// gdm command-line tool. Subcommands wire the library into the full
// workflows: dataset construction, training, mode-based map generation,
// any-shape denoising, and evaluation.
//
// Exit codes: 0 success, 2 usage/input error, 3 numerical failure,
// 4 compatibility error.

#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdm/config.hpp"
#include "gdm/dataset/blocks.hpp"
#include "gdm/dataset/corridor.hpp"
#include "gdm/dataset/shapes.hpp"
#include "gdm/dataset/sparse.hpp"
#include "gdm/denoiser/checkpoint.hpp"
#include "gdm/denoiser/train.hpp"
#include "gdm/error.hpp"
#include "gdm/io/cloud_io.hpp"
#include "gdm/io/path_io.hpp"
#include "gdm/metrics/metrics.hpp"
#include "gdm/metrics/report_io.hpp"
#include "gdm/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIncompatible = 4;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration");
  cmd->add_option("--seed", args.seed, "root random seed (overrides config)");
  cmd->add_option("--out", args.out_dir, "output directory");
}

/// flags > config file > defaults; returns the resolved configuration.
gdm::RunConfig resolve_config(const CommonArgs& args) {
  gdm::RunConfig config;
  if (!args.config_path.empty()) {
    config = gdm::load_config(args.config_path);
  }
  if (args.seed) {
    config.seed = *args.seed;
  }
  return config;
}

void prepare_out_dir(const CommonArgs& args, const gdm::RunConfig& config) {
  fs::create_directories(args.out_dir);
  gdm::write_resolved_config(
      (fs::path(args.out_dir) / "resolved_config.json").string(), config);
}

std::string block_cloud_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "block_%04zu.ply", i);
  return buf;
}

std::string block_path_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "path_%04zu.txt", i);
  return buf;
}

gdm::GenerationMode mode_from_settings(const gdm::Stage1Settings& s,
                                       const std::optional<gdm::SparseHits>& hits) {
  if (s.mode == "mode1" || s.mode == "1") {
    return gdm::FixedWidth{s.width};
  }
  if (s.mode == "mode2" || s.mode == "2") {
    return gdm::RandomWidth{s.width_low, s.width_high};
  }
  if (s.mode == "mode3" || s.mode == "3") {
    if (!hits) {
      throw gdm::InvalidArgument("mode 3 requires a hits file (--hits)");
    }
    return gdm::EstimatedWidth{*hits, s.geometry.width_cap};
  }
  throw gdm::InvalidArgument("unknown mode '" + s.mode +
                             "' (valid: mode1, mode2, mode3)");
}

// ---------------------------------------------------------------------------
// make-dataset

struct MakeDatasetArgs {
  CommonArgs common;
  std::string poses;
  std::string scans;
  std::size_t synthetic = 0;
  bool skip_missing = false;
};

int run_make_dataset(const MakeDatasetArgs& args) {
  gdm::RunConfig config = resolve_config(args.common);
  prepare_out_dir(args.common, config);
  const fs::path out(args.common.out_dir);

  nlohmann::json manifest;
  nlohmann::json blocks_json = nlohmann::json::array();
  std::vector<gdm::GroupedMap> grouped_for_stats;

  if (args.synthetic > 0) {
    gdm::RandomStream root(config.seed);
    gdm::RandomStream scene_seeds = root.derive(0x5343454e);  // "SCEN"
    for (std::size_t i = 0; i < args.synthetic; ++i) {
      const auto scene =
          gdm::make_corridor_scene(config.dataset.corridor, scene_seeds.next_u64());
      gdm::write_cloud_ply((out / block_cloud_name(i)).string(), scene.cloud);
      gdm::write_path_points((out / block_path_name(i)).string(), scene.path);
      blocks_json.push_back({{"cloud", block_cloud_name(i)},
                             {"path", block_path_name(i)},
                             {"points", scene.cloud.size()},
                             {"path_points", scene.path.size()}});
      grouped_for_stats.push_back(gdm::prepare_training_map(
          scene.cloud, scene.path, config.stage1.width, config.stage1.geometry));
    }
    manifest["kind"] = "synthetic-corridors";
  } else {
    if (args.poses.empty() || args.scans.empty()) {
      throw gdm::InvalidArgument("make-dataset needs --poses and --scans "
                                 "(or --synthetic N)");
    }
    const auto blocks = gdm::build_block_maps(
        args.poses, args.scans, config.dataset.block_length,
        config.dataset.target_points, args.skip_missing,
        [](const std::string& w) { std::cerr << "warning: " << w << "\n"; });
    std::size_t emitted = 0;
    for (const auto& block : blocks) {
      if (block.cloud.empty()) continue;
      gdm::write_cloud_ply((out / block_cloud_name(emitted)).string(), block.cloud);
      gdm::write_path_points((out / block_path_name(emitted)).string(), block.path);
      blocks_json.push_back({{"cloud", block_cloud_name(emitted)},
                             {"path", block_path_name(emitted)},
                             {"points", block.cloud.size()},
                             {"path_points", block.path.size()},
                             {"arc_begin", block.arc_begin},
                             {"arc_end", block.arc_end}});
      ++emitted;
    }
    manifest["kind"] = "block-maps";
  }

  manifest["blocks"] = blocks_json;
  manifest["seed"] = config.seed;
  if (!grouped_for_stats.empty()) {
    const auto stats = gdm::corpus_stats(grouped_for_stats);
    manifest["stats"] = {
        {"mean_points_per_group", stats.mean_points_per_group},
        {"group_count", stats.group_count},
        {"point_count", stats.point_count},
        {"mean_axis_std",
         {stats.mean_axis_std.x(), stats.mean_axis_std.y(), stats.mean_axis_std.z()}}};
  }
  manifest["metadata"] = {{"tool", "gdm"},
                          {"created_unix", static_cast<long>(std::time(nullptr))}};

  std::ofstream mf(out / "manifest.json");
  mf << manifest.dump(2) << "\n";
  std::cout << "wrote " << blocks_json.size() << " blocks to "
            << args.common.out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  CommonArgs common;
  std::string manifest;
  std::optional<std::size_t> epochs;
  std::optional<double> step_size;
  std::optional<double> r;
};

int run_train(const TrainArgs& args) {
  gdm::RunConfig config = resolve_config(args.common);
  if (args.epochs) config.training.epochs = *args.epochs;
  if (args.step_size) config.training.step_size = *args.step_size;
  if (args.r) config.training.r = *args.r;
  prepare_out_dir(args.common, config);
  const fs::path out(args.common.out_dir);

  std::ifstream mf(args.manifest);
  if (!mf) {
    throw gdm::ParseError(args.manifest, 0, "cannot open manifest");
  }
  nlohmann::json manifest;
  try {
    mf >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw gdm::ParseError(args.manifest, 0, e.what());
  }

  const fs::path base = fs::path(args.manifest).parent_path();
  std::vector<gdm::GroupedMap> dataset;
  for (const auto& entry : manifest.at("blocks")) {
    const auto cloud = gdm::read_cloud((base / entry.at("cloud").get<std::string>()).string());
    const auto path =
        gdm::read_path_points((base / entry.at("path").get<std::string>()).string());
    dataset.push_back(gdm::prepare_training_map(cloud, path, config.stage1.width,
                                                config.stage1.geometry));
  }

  gdm::TrainConfig train_cfg;
  train_cfg.arch = config.arch;
  train_cfg.schedule = config.schedule;
  train_cfg.epochs = config.training.epochs;
  train_cfg.step_size = config.training.step_size;
  train_cfg.r = config.training.r;

  const auto result = gdm::train(dataset, train_cfg, config.seed);

  gdm::save_params((out / "model.ckpt").string(), result.params, config.schedule);
  {
    std::ofstream trace(out / "loss_trace.csv");
    trace << "step,loss\n";
    trace.precision(17);
    for (std::size_t i = 0; i < result.loss_history.size(); ++i) {
      trace << i << "," << result.loss_history[i] << "\n";
    }
  }
  std::cout << "trained " << result.loss_history.size() << " steps; checkpoint "
            << (out / "model.ckpt").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  CommonArgs common;
  std::string path_file;
  std::string checkpoint;
  std::string hits_file;
  std::string truth_file;
  std::optional<std::string> mode;
  std::optional<double> width;
  std::optional<double> width_low;
  std::optional<double> width_high;
  std::optional<std::size_t> points_per_group;
  bool schedule_in_config = false;
};

int run_generate(const GenerateArgs& args) {
  gdm::RunConfig config = resolve_config(args.common);
  if (args.mode) config.stage1.mode = *args.mode;
  if (args.width) config.stage1.width = *args.width;
  if (args.width_low) config.stage1.width_low = *args.width_low;
  if (args.width_high) config.stage1.width_high = *args.width_high;
  if (args.points_per_group) {
    config.stage1.geometry.points_per_group = *args.points_per_group;
  }

  const gdm::Checkpoint ckpt = gdm::load_params(args.checkpoint);
  if (args.schedule_in_config) {
    // An explicitly configured schedule must agree with the checkpoint.
    gdm::require_schedule_compatible(ckpt, config.schedule);
  } else {
    config.schedule = ckpt.schedule;
  }
  if (!(ckpt.params.arch == config.arch)) {
    config.arch = ckpt.params.arch;  // checkpoint defines the network
  }
  prepare_out_dir(args.common, config);
  const fs::path out(args.common.out_dir);

  std::optional<gdm::SparseHits> hits;
  if (!args.hits_file.empty()) {
    hits = gdm::read_cloud(args.hits_file);
  }
  const gdm::GenerationMode mode = mode_from_settings(config.stage1, hits);

  const auto path_points = gdm::read_path_points(args.path_file);
  const auto result = gdm::generate_map(path_points, mode, ckpt,
                                        config.stage1.geometry, config.seed);

  gdm::write_cloud_ply((out / "generated.ply").string(), result.generated);
  gdm::write_cloud_ply((out / "initial.ply").string(), result.initial);
  std::cout << "generated " << result.generated.size() << " points over "
            << result.centers.size() << " centers\n";

  if (!args.truth_file.empty()) {
    const auto truth = gdm::read_cloud(args.truth_file);
    const auto report =
        gdm::evaluate(result.generated, truth, config.eval_resolutions);
    gdm::write_report((out / "report.json").string(),
                      (out / "report.txt").string(), report);
    const auto errors = gdm::error_field(result.generated, truth);
    gdm::write_cloud_ply((out / "error_map.ply").string(), result.generated,
                         &errors);
    std::cout << gdm::to_text(report);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// denoise-shape

struct DenoiseShapeArgs {
  CommonArgs common;
  std::string kind = "line";
  std::string checkpoint;
  std::optional<double> length;
  std::optional<double> width;
  std::optional<double> diameter;
  std::optional<double> side;
  std::optional<double> noise_scale;
  std::optional<std::size_t> t_start;
  bool schedule_in_config = false;
};

int run_denoise_shape(const DenoiseShapeArgs& args) {
  gdm::RunConfig config = resolve_config(args.common);
  const gdm::Checkpoint ckpt = gdm::load_params(args.checkpoint);
  if (args.schedule_in_config) {
    gdm::require_schedule_compatible(ckpt, config.schedule);
  } else {
    config.schedule = ckpt.schedule;
  }
  prepare_out_dir(args.common, config);
  const fs::path out(args.common.out_dir);

  gdm::ShapeSpec spec;
  spec.kind = gdm::shape_kind_from_string(args.kind);
  if (args.length) spec.length = *args.length;
  if (args.width) spec.width = *args.width;
  if (args.diameter) spec.diameter = *args.diameter;
  if (args.side) spec.side = *args.side;
  if (args.noise_scale) spec.noise_scale = *args.noise_scale;

  gdm::RandomStream root(config.seed);
  const std::uint64_t shape_seed = root.derive(1).next_u64();
  const std::uint64_t chain_seed = root.derive(2).next_u64();
  const auto shape = gdm::synth_shape(spec, shape_seed);
  const auto denoised =
      gdm::denoise_cloud(shape.noisy, shape.centers, ckpt, chain_seed,
                         args.t_start.value_or(0));

  gdm::write_cloud_ply((out / "noisy.ply").string(), shape.noisy);
  gdm::write_cloud_ply((out / "clean.ply").string(), shape.clean);
  gdm::write_cloud_ply((out / "denoised.ply").string(), denoised);
  std::cout << "denoised " << denoised.size() << " points (" << args.kind
            << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  CommonArgs common;
  std::string generated;
  std::string truth;
  std::vector<double> resolutions;
};

int run_evaluate(const EvaluateArgs& args) {
  gdm::RunConfig config = resolve_config(args.common);
  if (!args.resolutions.empty()) {
    config.eval_resolutions = args.resolutions;
  }
  prepare_out_dir(args.common, config);
  const fs::path out(args.common.out_dir);

  const auto generated = gdm::read_cloud(args.generated);
  const auto truth = gdm::read_cloud(args.truth);
  const auto report = gdm::evaluate(generated, truth, config.eval_resolutions);
  gdm::write_report((out / "report.json").string(), (out / "report.txt").string(),
                    report);
  const auto errors = gdm::error_field(generated, truth);
  gdm::write_cloud_ply((out / "error_map.ply").string(), generated, &errors);
  std::cout << gdm::to_text(report);
  return kExitOk;
}

bool config_declares_schedule(const std::string& config_path) {
  if (config_path.empty()) return false;
  std::ifstream in(config_path);
  if (!in) return false;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    return false;
  }
  return j.contains("schedule");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gdm: group-diffusion point-cloud map generation"};
  app.require_subcommand(1);

  MakeDatasetArgs make_args;
  auto* make = app.add_subcommand(
      "make-dataset", "build block maps from poses+scans, or a synthetic corpus");
  add_common(make, make_args.common);
  make->add_option("--poses", make_args.poses, "pose file (xyz or 3x4 rows)");
  make->add_option("--scans", make_args.scans, "directory of per-pose scans");
  make->add_option("--synthetic", make_args.synthetic,
                   "emit N synthetic corridor scenes instead");
  make->add_flag("--skip-missing", make_args.skip_missing,
                 "warn instead of failing on missing scans");

  TrainArgs train_args;
  auto* tr = app.add_subcommand("train", "train the denoiser on a dataset");
  add_common(tr, train_args.common);
  tr->add_option("--dataset", train_args.manifest, "dataset manifest.json")
      ->required();
  tr->add_option("--epochs", train_args.epochs, "training epochs (default 200)");
  tr->add_option("--step-size", train_args.step_size, "optimizer step size");
  tr->add_option("--r", train_args.r, "regularization weight (default 5)");

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "two-stage map generation from a path");
  add_common(gen, gen_args.common);
  gen->add_option("--path", gen_args.path_file, "path/pose file")->required();
  gen->add_option("--checkpoint", gen_args.checkpoint, "trained model")->required();
  gen->add_option("--mode", gen_args.mode, "mode1|mode2|mode3");
  gen->add_option("--hits", gen_args.hits_file, "sparse hits cloud (mode 3)");
  gen->add_option("--truth", gen_args.truth_file, "ground truth for evaluation");
  gen->add_option("--width", gen_args.width, "mode 1 fixed width (default 20)");
  gen->add_option("--width-low", gen_args.width_low, "mode 2 range low (default 15)");
  gen->add_option("--width-high", gen_args.width_high,
                  "mode 2 range high (default 35)");
  gen->add_option("--points-per-group", gen_args.points_per_group,
                  "points sampled per center");

  DenoiseShapeArgs shape_args;
  auto* shape = app.add_subcommand("denoise-shape",
                                   "denoise a synthetic noisy outline");
  add_common(shape, shape_args.common);
  shape->add_option("--kind", shape_args.kind, "line|curve|ring|square");
  shape->add_option("--checkpoint", shape_args.checkpoint, "trained model")
      ->required();
  shape->add_option("--length", shape_args.length, "line/curve length");
  shape->add_option("--width", shape_args.width, "line/curve width");
  shape->add_option("--diameter", shape_args.diameter, "ring diameter");
  shape->add_option("--side", shape_args.side, "square side");
  shape->add_option("--noise-scale", shape_args.noise_scale,
                    "gaussian noise sigma (default 1)");
  shape->add_option("--t-start", shape_args.t_start,
                    "start the chain at this timestep (default T)");

  EvaluateArgs eval_args;
  auto* ev = app.add_subcommand("evaluate", "chamfer + IoU report");
  add_common(ev, eval_args.common);
  ev->add_option("--generated", eval_args.generated, "generated cloud")->required();
  ev->add_option("--truth", eval_args.truth, "ground-truth cloud")->required();
  ev->add_option("--resolutions", eval_args.resolutions,
                 "IoU grid resolutions in meters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  gen_args.schedule_in_config = config_declares_schedule(gen_args.common.config_path);
  shape_args.schedule_in_config =
      config_declares_schedule(shape_args.common.config_path);

  try {
    if (make->parsed()) return run_make_dataset(make_args);
    if (tr->parsed()) return run_train(train_args);
    if (gen->parsed()) return run_generate(gen_args);
    if (shape->parsed()) return run_denoise_shape(shape_args);
    if (ev->parsed()) return run_evaluate(eval_args);
  } catch (const gdm::IncompatibleCheckpoint& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIncompatible;
  } catch (const gdm::TrainingDiverged& e) {
    std::cerr << "error: training diverged at " << e.what() << "\n";
    return kExitNumerical;
  } catch (const gdm::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const gdm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
