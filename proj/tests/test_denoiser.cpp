// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>

#include "gdm/dataset/corridor.hpp"
#include "gdm/denoiser/checkpoint.hpp"
#include "gdm/denoiser/gradients.hpp"
#include "gdm/denoiser/loss.hpp"
#include "gdm/denoiser/network.hpp"
#include "gdm/denoiser/train.hpp"
#include "gdm/pipeline.hpp"
#include "oracles.hpp"

using gdm::ArchDescriptor;
using gdm::DenoiserParams;
using gdm::NoisyMapState;
using gdm::Vec3;

namespace {

NoisyMapState small_state(std::size_t points_per_group, std::uint64_t seed,
                          std::size_t t = 10) {
  return gdm::init_noisy_map({Vec3(0, 0, 0), Vec3(6, 1, 0)}, points_per_group,
                             seed, t);
}

std::vector<Vec3> random_noise(std::size_t n, gdm::RandomStream& rng) {
  std::vector<Vec3> eps;
  for (std::size_t i = 0; i < n; ++i) {
    eps.emplace_back(rng.normal(), rng.normal(), rng.normal());
  }
  return eps;
}

}  // namespace

TEST_CASE("time embedding is deterministic and distinguishes timesteps") {
  const gdm::TimeEmbedding emb(16);
  CHECK(emb.embed(7) == emb.embed(7));
  CHECK((emb.embed(7) - emb.embed(8)).norm() > 0.0);
  CHECK_THROWS_AS(gdm::TimeEmbedding(3), gdm::InvalidArgument);
}

TEST_CASE("predict_noise: all-zero parameters give all-zero predictions") {
  ArchDescriptor arch;
  arch.hidden = {8, 8};
  const auto params = gdm::zero_params(arch);
  const auto state = small_state(5, 3);
  for (const Vec3& pred : gdm::predict_noise(params, state)) {
    CHECK(pred == Vec3(0, 0, 0));
  }
}

TEST_CASE("predict_noise: permuting points permutes predictions") {
  ArchDescriptor arch;
  arch.hidden = {16};
  const auto params = gdm::init_params(arch, 5);
  const auto state = small_state(4, 9);
  const auto pred = gdm::predict_noise(params, state);

  // Swap group order and reverse the points inside each group.
  NoisyMapState shuffled;
  shuffled.timestep = state.timestep;
  shuffled.centers = {state.centers[1], state.centers[0]};
  shuffled.groups = {state.groups[1], state.groups[0]};
  for (auto& group : shuffled.groups) {
    std::reverse(group.begin(), group.end());
  }
  const auto shuffled_pred = gdm::predict_noise(params, shuffled);

  const std::size_t per_group = 4;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < per_group; ++j) {
      const Vec3 expect = pred[(1 - i) * per_group + (per_group - 1 - j)];
      CHECK((shuffled_pred[i * per_group + j] - expect).cwiseAbs().maxCoeff() <
            1e-12);
    }
  }
}

TEST_CASE("predict_noise: hand-computed forward pass on a tiny network") {
  ArchDescriptor arch;
  arch.hidden = {8, 8};
  arch.time_embed_dim = 2;
  arch.knn_k = 8;
  arch.center_scale = 0.01;
  DenoiserParams params = gdm::zero_params(arch);
  // Deterministic, easily reproducible weight pattern.
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    for (Eigen::Index r = 0; r < params.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < params.weights[l].cols(); ++c) {
        params.weights[l](r, c) =
            0.05 * std::sin(1.0 + 3.0 * static_cast<double>(l) +
                            0.7 * static_cast<double>(r) -
                            0.3 * static_cast<double>(c));
      }
    }
    for (Eigen::Index r = 0; r < params.biases[l].size(); ++r) {
      params.biases[l][r] = 0.01 * static_cast<double>(l + 1) -
                            0.002 * static_cast<double>(r);
    }
  }

  NoisyMapState state;
  state.timestep = 4;
  state.centers = {Vec3(1, 2, 0)};
  state.groups = {{Vec3(1.5, 1.0, 0.25)}};
  const Vec3 pred = gdm::predict_noise(params, state)[0];

  // Manual forward pass: single point, so the knn offset is zero.
  const gdm::TimeEmbedding emb(2);
  std::vector<double> x = {0.5, -1.0, 0.25, 0.01, 0.02, 0.0, 0.0, 0.0, 0.0};
  const auto t_vec = emb.embed(4);
  x.push_back(t_vec[0]);
  x.push_back(t_vec[1]);
  REQUIRE(x.size() == arch.feature_dim());

  std::vector<double> h = x;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    std::vector<double> a(params.biases[l].size());
    for (std::size_t r = 0; r < a.size(); ++r) {
      double sum = params.biases[l][static_cast<Eigen::Index>(r)];
      for (std::size_t c = 0; c < h.size(); ++c) {
        sum += params.weights[l](static_cast<Eigen::Index>(r),
                                 static_cast<Eigen::Index>(c)) *
               h[c];
      }
      a[r] = sum;
    }
    if (l + 1 < params.weights.size()) {
      for (double& v : a) v = std::tanh(v);
    }
    h = a;
  }
  REQUIRE(h.size() == 3);
  CHECK(std::abs(pred.x() - h[0]) < 1e-9);
  CHECK(std::abs(pred.y() - h[1]) < 1e-9);
  CHECK(std::abs(pred.z() - h[2]) < 1e-9);
}

TEST_CASE("predict_noise rejects mismatched parameter shapes") {
  ArchDescriptor arch;
  arch.hidden = {8};
  auto params = gdm::init_params(arch, 1);
  params.weights[0].resize(8, 3);  // wrong input width
  CHECK_THROWS_AS(gdm::predict_noise(params, small_state(2, 1)),
                  gdm::InvalidArgument);
}

TEST_CASE("loss: perfect statistics-matching prediction scores zero") {
  // Components are +-1 with equal counts: mean 0, population std exactly 1.
  const std::vector<Vec3> eps = {Vec3(1, -1, 1), Vec3(-1, 1, -1)};
  const auto report = gdm::loss(eps, eps, 5.0);
  CHECK(report.l_mse == 0.0);
  CHECK(report.l_mean == 0.0);
  CHECK(report.l_std == 0.0);
  CHECK(report.total == 0.0);
}

TEST_CASE("loss: one-point example") {
  const auto report = gdm::loss({Vec3(0, 0, 0)}, {Vec3(1, 0, 0)}, 0.0);
  CHECK(report.l_mse == Catch::Approx(1.0));
  CHECK(report.total == Catch::Approx(1.0));
}

TEST_CASE("loss errors") {
  CHECK_THROWS_AS(gdm::loss({}, {}, 5.0), gdm::EmptyInput);
  CHECK_THROWS_AS(gdm::loss({Vec3(0, 0, 0)}, {}, 5.0), gdm::InvalidArgument);
  CHECK_THROWS_AS(gdm::loss({Vec3(0, 0, 0)}, {Vec3(0, 0, 0)}, -1.0),
                  gdm::InvalidArgument);
}

TEST_CASE("loss matches an independent accumulation oracle") {
  gdm::RandomStream rng(83);
  const auto eps_true = random_noise(64, rng);
  const auto eps_pred = random_noise(64, rng);
  const auto report = gdm::loss(eps_true, eps_pred, 5.0);

  // Independent pass: plain scalar loops.
  const double n = 64.0;
  const double m = 3.0 * n;
  double mse = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < 64; ++i) {
    for (int c = 0; c < 3; ++c) {
      const double d = eps_true[i][c] - eps_pred[i][c];
      mse += d * d;
      sum += eps_pred[i][c];
    }
  }
  mse /= n;
  const double mean = sum / m;
  double var = 0.0;
  for (std::size_t i = 0; i < 64; ++i) {
    for (int c = 0; c < 3; ++c) {
      var += (eps_pred[i][c] - mean) * (eps_pred[i][c] - mean);
    }
  }
  var /= m;
  const double l_mean = mean * mean;
  const double l_std = (std::sqrt(var) - 1.0) * (std::sqrt(var) - 1.0);

  CHECK(std::abs(report.l_mse - mse) < 1e-12);
  CHECK(std::abs(report.l_mean - l_mean) < 1e-12);
  CHECK(std::abs(report.l_std - l_std) < 1e-12);
  CHECK(report.total == report.l_mse + 5.0 * (report.l_mean + report.l_std));
}

TEST_CASE("loss decomposition identity holds exactly") {
  gdm::RandomStream rng(89);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_noise(10, rng);
    const auto b = random_noise(10, rng);
    const double r = rng.uniform(0.0, 10.0);
    const auto report = gdm::loss(a, b, r);
    CHECK(report.total == report.l_mse + r * (report.l_mean + report.l_std));
    CHECK(report.l_mse >= 0.0);
    CHECK(report.l_mean >= 0.0);
    CHECK(report.l_std >= 0.0);
  }
}

TEST_CASE("zero-parameter network: bias gradient has the closed form") {
  ArchDescriptor arch;
  arch.hidden = {8, 8};
  const auto params = gdm::zero_params(arch);
  const auto state = small_state(10, 21);
  gdm::RandomStream rng(97);
  const auto eps = random_noise(state.total_points(), rng);
  const auto result = gdm::loss_gradients(params, state, eps, 5.0);

  // Prediction is identically zero: only the mse term contributes, and only
  // to the output bias: d l_mse / d b_out[c] = -(2/N) sum_i eps[i][c].
  const double n = static_cast<double>(state.total_points());
  Vec3 expect = Vec3::Zero();
  for (const Vec3& e : eps) expect += e;
  expect *= -2.0 / n;

  const auto& b_out = result.grads.biases.back();
  for (int c = 0; c < 3; ++c) {
    CHECK(b_out[c] == Catch::Approx(expect[c]).margin(1e-12));
  }
  for (std::size_t l = 0; l + 1 < result.grads.weights.size(); ++l) {
    CHECK(result.grads.weights[l].cwiseAbs().maxCoeff() == 0.0);
    CHECK(result.grads.biases[l].cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(result.grads.weights.back().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dead unit: zero downstream connectivity means zero gradient") {
  ArchDescriptor arch;
  arch.hidden = {8, 8};
  auto params = gdm::init_params(arch, 31);
  // Cut every outgoing weight of the last hidden layer's unit 0.
  params.weights.back().col(0).setZero();
  const auto state = small_state(6, 33);
  gdm::RandomStream rng(101);
  const auto eps = random_noise(state.total_points(), rng);
  const auto result = gdm::loss_gradients(params, state, eps, 5.0);
  CHECK(result.grads.weights[1].row(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(result.grads.biases[1][0] == 0.0);
}

TEST_CASE("analytic gradients match central finite differences") {
  ArchDescriptor arch;
  arch.hidden = {8, 8};
  auto params = gdm::init_params(arch, 47);
  const auto state = small_state(10, 55);  // 20 points
  gdm::RandomStream rng(103);
  const auto eps = random_noise(state.total_points(), rng);
  const double r = 5.0;
  const auto result = gdm::loss_gradients(params, state, eps, r);

  const Eigen::MatrixXd features = gdm::build_features(arch, state);
  auto eval_loss = [&](const DenoiserParams& p) {
    const auto cache = gdm::forward_pass(p, features);
    std::vector<Vec3> pred;
    for (Eigen::Index i = 0; i < cache.output.rows(); ++i) {
      pred.emplace_back(cache.output(i, 0), cache.output(i, 1),
                        cache.output(i, 2));
    }
    return gdm::loss(eps, pred, r).total;
  };

  const double h = 1e-4;
  gdm::RandomStream pick(107);
  std::size_t checked = 0;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    for (int rep = 0; rep < 100; ++rep) {
      const bool weight = pick.uniform() < 0.8;
      DenoiserParams plus = params;
      DenoiserParams minus = params;
      double analytic = 0.0;
      if (weight) {
        const auto row = static_cast<Eigen::Index>(pick.index(params.weights[l].rows()));
        const auto col = static_cast<Eigen::Index>(pick.index(params.weights[l].cols()));
        plus.weights[l](row, col) += h;
        minus.weights[l](row, col) -= h;
        analytic = result.grads.weights[l](row, col);
      } else {
        const auto row = static_cast<Eigen::Index>(pick.index(params.biases[l].size()));
        plus.biases[l][row] += h;
        minus.biases[l][row] -= h;
        analytic = result.grads.biases[l][row];
      }
      const double numeric = (eval_loss(plus) - eval_loss(minus)) / (2.0 * h);
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      CHECK(std::abs(analytic - numeric) / denom < 1e-4);
      ++checked;
    }
  }
  CHECK(checked >= 300);
}

TEST_CASE("train: zero step size leaves parameters untouched") {
  gdm::CorridorSpec spec;
  spec.points = 64;
  spec.path_length = 6.0;
  spec.half_width = 2.0;
  const auto scene = gdm::make_corridor_scene(spec, 3);
  const auto map = gdm::prepare_training_map(scene.cloud, scene.path, 2.0, {});

  gdm::TrainConfig cfg;
  cfg.arch.hidden = {8};
  cfg.schedule = {16, 1e-3, 0.2};
  cfg.epochs = 1;
  cfg.step_size = 0.0;
  const auto result = gdm::train({map}, cfg, 5);
  const auto fresh =
      gdm::init_params(cfg.arch, gdm::RandomStream(5).derive(0x494e4954).next_u64());
  for (std::size_t l = 0; l < fresh.weights.size(); ++l) {
    CHECK(result.params.weights[l] == fresh.weights[l]);
    CHECK(result.params.biases[l] == fresh.biases[l]);
  }
  CHECK(result.loss_history.size() == 1);
}

TEST_CASE("train: loss trends down on a toy corridor corpus") {
  gdm::CorridorSpec spec;
  spec.points = 512;
  spec.path_length = 10.0;
  spec.half_width = 3.0;
  std::vector<gdm::GroupedMap> corpus;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto scene = gdm::make_corridor_scene(spec, 100 + s);
    corpus.push_back(gdm::prepare_training_map(scene.cloud, scene.path, 3.0, {}));
  }

  gdm::TrainConfig cfg;
  cfg.arch.hidden = {16, 16};
  cfg.schedule = {64, 1e-3, 0.15};
  cfg.epochs = 250;  // 8 scenes -> 2000 steps
  const auto result = gdm::train(corpus, cfg, 11);
  REQUIRE(result.loss_history.size() == 2000);

  double first = 0.0, last = 0.0;
  for (int i = 0; i < 100; ++i) {
    first += result.loss_history[i];
    last += result.loss_history[2000 - 100 + i];
  }
  CHECK(last / 100.0 < first / 100.0);
}

TEST_CASE("train: identical seeds give identical loss traces") {
  gdm::CorridorSpec spec;
  spec.points = 96;
  spec.path_length = 6.0;
  spec.half_width = 2.0;
  const auto scene = gdm::make_corridor_scene(spec, 17);
  const auto map = gdm::prepare_training_map(scene.cloud, scene.path, 2.0, {});

  gdm::TrainConfig cfg;
  cfg.arch.hidden = {8};
  cfg.schedule = {16, 1e-3, 0.2};
  cfg.epochs = 5;
  const auto a = gdm::train({map}, cfg, 123);
  const auto b = gdm::train({map}, cfg, 123);
  CHECK(a.loss_history == b.loss_history);
}

TEST_CASE("checkpoint round trip is bit exact") {
  ArchDescriptor arch;
  arch.hidden = {8, 8};
  const auto params = gdm::init_params(arch, 77);
  const gdm::ScheduleSpec sched{64, 1e-3, 0.15};

  const auto path = std::filesystem::temp_directory_path() / "gdm_test.ckpt";
  gdm::save_params(path.string(), params, sched);
  const auto loaded = gdm::load_params(path.string());

  CHECK(loaded.schedule == sched);
  CHECK(loaded.params.arch == arch);
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    CHECK(loaded.params.weights[l] == params.weights[l]);
    CHECK(loaded.params.biases[l] == params.biases[l]);
  }
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint rejects bad magic and mismatched schedules") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto bad = dir / "gdm_bad.ckpt";
  {
    std::ofstream out(bad, std::ios::binary);
    out << "NOPEnope this is not a checkpoint";
  }
  CHECK_THROWS_AS(gdm::load_params(bad.string()), gdm::ParseError);
  std::filesystem::remove(bad);

  ArchDescriptor arch;
  arch.hidden = {4};
  const auto params = gdm::init_params(arch, 1);
  const auto path = dir / "gdm_t500.ckpt";
  gdm::save_params(path.string(), params, {500, 1e-4, 0.02});
  const auto ckpt = gdm::load_params(path.string());
  CHECK_THROWS_AS(gdm::require_schedule_compatible(ckpt, {1000, 1e-4, 0.02}),
                  gdm::IncompatibleCheckpoint);
  CHECK_NOTHROW(gdm::require_schedule_compatible(ckpt, {500, 1e-4, 0.02}));
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint detects truncation") {
  ArchDescriptor arch;
  arch.hidden = {4};
  const auto params = gdm::init_params(arch, 2);
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "gdm_trunc.ckpt";
  gdm::save_params(path.string(), params, {16, 1e-3, 0.2});
  const auto full_size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, full_size - 9);
  CHECK_THROWS_AS(gdm::load_params(path.string()), gdm::ParseError);
  std::filesystem::remove(path);
}
