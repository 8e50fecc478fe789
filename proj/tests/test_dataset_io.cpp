// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>

#include "gdm/dataset/blocks.hpp"
#include "gdm/dataset/corridor.hpp"
#include "gdm/dataset/shapes.hpp"
#include "gdm/dataset/sparse.hpp"
#include "gdm/io/cloud_io.hpp"
#include "gdm/io/path_io.hpp"
#include "gdm/pipeline.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using gdm::PointCloud;
using gdm::Vec3;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gdm_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_scan_bin(const std::string& path, const std::vector<Vec3>& pts) {
  std::ofstream out(path, std::ios::binary);
  for (const Vec3& p : pts) {
    const float rec[4] = {static_cast<float>(p.x()), static_cast<float>(p.y()),
                          static_cast<float>(p.z()), 0.5f};
    out.write(reinterpret_cast<const char*>(rec), sizeof(rec));
  }
}

}  // namespace

TEST_CASE("xyz round trip preserves values at text precision") {
  TempDir dir;
  gdm::RandomStream rng(171);
  const PointCloud cloud = oracle::random_cloud(100, rng);
  const auto path = dir.file("cloud.xyz");
  gdm::write_cloud_xyz(path, cloud);
  const auto back = gdm::read_cloud_xyz(path);
  REQUIRE(back.size() == cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK((back[i] - cloud[i]).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("xyz rejects malformed rows with line numbers") {
  TempDir dir;
  const auto path = dir.file("bad.xyz");
  {
    std::ofstream out(path);
    out << "1.0 2.0 3.0\n1.0 2.0\n";
  }
  try {
    gdm::read_cloud_xyz(path);
    FAIL("expected ParseError");
  } catch (const gdm::ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("ply binary round trip is exact at f32") {
  TempDir dir;
  gdm::RandomStream rng(173);
  const PointCloud cloud = oracle::random_cloud(1000, rng);
  const auto path = dir.file("cloud.ply");
  gdm::write_cloud_ply(path, cloud);
  const auto back = gdm::read_cloud_ply(path);
  REQUIRE(back.size() == cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK(back[i].x() == static_cast<double>(static_cast<float>(cloud[i].x())));
    CHECK(back[i].y() == static_cast<double>(static_cast<float>(cloud[i].y())));
    CHECK(back[i].z() == static_cast<double>(static_cast<float>(cloud[i].z())));
  }
}

TEST_CASE("ply with error scalar reads back, extra property skipped") {
  TempDir dir;
  const PointCloud cloud({Vec3(1, 2, 3), Vec3(4, 5, 6)});
  const std::vector<double> errors = {0.5, 1.5};
  const auto path = dir.file("err.ply");
  gdm::write_cloud_ply(path, cloud, &errors);
  const auto back = gdm::read_cloud_ply(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].x() == 1.0);
  CHECK(back[1].z() == 6.0);
}

TEST_CASE("ply rejects list properties by name") {
  TempDir dir;
  const auto path = dir.file("faces.ply");
  {
    std::ofstream out(path, std::ios::binary);
    out << "ply\nformat binary_little_endian 1.0\nelement vertex 0\n"
        << "property float x\nproperty float y\nproperty float z\n"
        << "property list uchar int vertex_indices\nend_header\n";
  }
  try {
    gdm::read_cloud_ply(path);
    FAIL("expected ParseError");
  } catch (const gdm::ParseError& e) {
    CHECK(std::string(e.what()).find("vertex_indices") != std::string::npos);
  }
}

TEST_CASE("ply rejects ascii format and bad magic") {
  TempDir dir;
  const auto ascii = dir.file("ascii.ply");
  {
    std::ofstream out(ascii);
    out << "ply\nformat ascii 1.0\nelement vertex 0\nend_header\n";
  }
  CHECK_THROWS_AS(gdm::read_cloud_ply(ascii), gdm::ParseError);

  const auto junk = dir.file("junk.ply");
  {
    std::ofstream out(junk);
    out << "obj\n";
  }
  CHECK_THROWS_AS(gdm::read_cloud_ply(junk), gdm::ParseError);
}

TEST_CASE("pose reading: xyz rows and 3x4 matrices, auto-detected") {
  TempDir dir;
  const auto path = dir.file("poses.txt");
  {
    std::ofstream out(path);
    out << "1.0 2.0 3.0\n";
    out << "1 0 0 10  0 1 0 20  0 0 1 30\n";
  }
  const auto poses = gdm::read_poses(path);
  REQUIRE(poses.size() == 2);
  CHECK(poses[0].translation == Vec3(1, 2, 3));
  CHECK(poses[1].translation == Vec3(10, 20, 30));
  CHECK(poses[1].rotation == Eigen::Matrix3d::Identity());
}

TEST_CASE("pose reading rejects odd token counts") {
  TempDir dir;
  const auto path = dir.file("poses.txt");
  {
    std::ofstream out(path);
    out << "1.0 2.0 3.0 4.0 5.0\n";
  }
  CHECK_THROWS_AS(gdm::read_poses(path), gdm::ParseError);
}

TEST_CASE("sample_sparse_hits: k = n returns the whole cloud in order") {
  gdm::RandomStream rng(181);
  const PointCloud cloud = oracle::random_cloud(40, rng);
  const auto hits = gdm::sample_sparse_hits(cloud, 40, 9);
  REQUIRE(hits.size() == 40);
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(hits[i] == cloud[i]);
  }
}

TEST_CASE("sample_sparse_hits: 50 distinct seeded points") {
  gdm::RandomStream rng(191);
  const PointCloud cloud = oracle::random_cloud(5000, rng);
  const auto hits = gdm::sample_sparse_hits(cloud, 50, 33);
  REQUIRE(hits.size() == 50);
  const auto again = gdm::sample_sparse_hits(cloud, 50, 33);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(hits[i] == again[i]);
  }
  // Distinctness: ascending-index selection cannot repeat a point.
  for (std::size_t i = 0; i + 1 < 50; ++i) {
    CHECK(hits[i] != hits[i + 1]);
  }
  CHECK_THROWS_AS(gdm::sample_sparse_hits(cloud, 5001, 0), gdm::InvalidArgument);
}

TEST_CASE("synth_shape line: lattice counting") {
  gdm::ShapeSpec spec;
  spec.kind = gdm::ShapeKind::Line;
  spec.length = 200.0;
  spec.width = 20.0;
  const auto shape = gdm::synth_shape(spec, 1);
  CHECK(shape.clean.size() == 201 * 21);
  CHECK(shape.centers.size() == shape.clean.size());
}

TEST_CASE("synth_shape ring: points lie on the circle band") {
  gdm::ShapeSpec spec;
  spec.kind = gdm::ShapeKind::Ring;
  spec.diameter = 120.0;
  const auto shape = gdm::synth_shape(spec, 2);
  CHECK(shape.clean.size() >= 300);
  for (const Vec3& p : shape.clean) {
    CHECK(std::hypot(p.x(), p.y()) == Catch::Approx(60.0).margin(1e-9));
    CHECK(p.z() == 0.0);
  }
}

TEST_CASE("synth_shape: zero noise scale means noisy equals clean") {
  gdm::ShapeSpec spec;
  spec.kind = gdm::ShapeKind::Square;
  spec.side = 20.0;
  spec.noise_scale = 0.0;
  const auto shape = gdm::synth_shape(spec, 3);
  CHECK(shape.clean.size() == 21 * 21);
  for (std::size_t i = 0; i < shape.clean.size(); ++i) {
    CHECK(shape.noisy[i] == shape.clean[i]);
  }
}

TEST_CASE("synth_shape determinism and curve bend") {
  gdm::ShapeSpec spec;
  spec.kind = gdm::ShapeKind::Curve;
  spec.length = 100.0;
  spec.width = 10.0;
  const auto a = gdm::synth_shape(spec, 7);
  const auto b = gdm::synth_shape(spec, 7);
  REQUIRE(a.noisy.size() == b.noisy.size());
  for (std::size_t i = 0; i < a.noisy.size(); ++i) {
    CHECK(a.noisy[i] == b.noisy[i]);
  }
  // The bend must actually displace the corridor laterally.
  double max_y = 0.0;
  for (const Vec3& p : a.clean) max_y = std::max(max_y, std::abs(p.y()));
  CHECK(max_y > 10.0);
}

TEST_CASE("build_block_maps: 450 m straight trajectory gives 3 blocks") {
  TempDir dir;
  const auto poses = dir.file("poses.txt");
  {
    std::ofstream out(poses);
    // One pose every 10 m along x, 46 poses: arc length 450.
    for (int i = 0; i < 46; ++i) {
      out << (10.0 * i) << " 0 0\n";
    }
  }
  const auto scans = dir.file("scans");
  fs::create_directories(scans);
  for (int i = 0; i < 46; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%010d.bin", i);
    write_scan_bin((fs::path(scans) / name).string(),
                   {Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1)});
  }

  const auto blocks = gdm::build_block_maps(poses, scans, 150.0, 50000);
  REQUIRE(blocks.size() == 3);
  // Pose at s=150 belongs to block 0 (boundary tie -> lower index):
  // block 0 holds poses 0..15 (16 poses), blocks 1 and 2 hold 15 each.
  CHECK(blocks[0].cloud.size() == 16 * 3);
  CHECK(blocks[1].cloud.size() == 15 * 3);
  CHECK(blocks[2].cloud.size() == 15 * 3);
  CHECK(blocks[0].path.size() == 16);

  // World-frame accumulation: scan points follow the pose translation.
  bool found = false;
  for (const Vec3& p : blocks[2].cloud) {
    if ((p - Vec3(450.0, 1.0, 0.0)).norm() < 1e-6) found = true;
  }
  CHECK(found);
}

TEST_CASE("build_block_maps: no upsampling beyond available points") {
  TempDir dir;
  const auto poses = dir.file("poses.txt");
  {
    std::ofstream out(poses);
    out << "0 0 0\n5 0 0\n";
  }
  const auto scans = dir.file("scans");
  fs::create_directories(scans);
  write_scan_bin((fs::path(scans) / "0000000000.bin").string(),
                 {Vec3(0, 0, 0), Vec3(1, 0, 0)});
  write_scan_bin((fs::path(scans) / "0000000001.bin").string(),
                 {Vec3(0, 1, 0)});
  const auto blocks = gdm::build_block_maps(poses, scans, 150.0, 50000);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].cloud.size() == 3);  // kept as-is, no upsampling
}

TEST_CASE("build_block_maps: FPS downsampling to the target") {
  TempDir dir;
  const auto poses = dir.file("poses.txt");
  {
    std::ofstream out(poses);
    out << "0 0 0\n5 0 0\n";
  }
  const auto scans = dir.file("scans");
  fs::create_directories(scans);
  gdm::RandomStream rng(199);
  std::vector<Vec3> big;
  for (int i = 0; i < 500; ++i) {
    big.emplace_back(rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 2));
  }
  write_scan_bin((fs::path(scans) / "0000000000.bin").string(), big);
  write_scan_bin((fs::path(scans) / "0000000001.bin").string(), {Vec3(0, 0, 0)});
  const auto blocks = gdm::build_block_maps(poses, scans, 150.0, 100);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].cloud.size() == 100);
}

TEST_CASE("build_block_maps: missing scans raise or skip") {
  TempDir dir;
  const auto poses = dir.file("poses.txt");
  {
    std::ofstream out(poses);
    out << "0 0 0\n5 0 0\n";
  }
  const auto scans = dir.file("scans");
  fs::create_directories(scans);
  write_scan_bin((fs::path(scans) / "0000000000.bin").string(), {Vec3(0, 0, 0)});

  CHECK_THROWS_AS(gdm::build_block_maps(poses, scans, 150.0, 100),
                  gdm::MissingScan);

  std::vector<std::string> warnings;
  const auto blocks = gdm::build_block_maps(
      poses, scans, 150.0, 100, true,
      [&](const std::string& w) { warnings.push_back(w); });
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].cloud.size() == 1);
  CHECK(warnings.size() == 1);
}

TEST_CASE("corridor scenes: deterministic, correct extent, stats in band") {
  gdm::CorridorSpec spec;  // defaults: 24 m path, half width 8, 2000 points
  const auto a = gdm::make_corridor_scene(spec, 3);
  const auto b = gdm::make_corridor_scene(spec, 3);
  REQUIRE(a.cloud.size() == 2000);
  for (std::size_t i = 0; i < a.cloud.size(); ++i) {
    CHECK(a.cloud[i] == b.cloud[i]);
  }
  CHECK(a.path.size() == 25);

  // Dense corridor so per-group counts are large enough for stable stats.
  gdm::CorridorSpec dense;
  dense.points = 40000;
  dense.path_length = 10.0;
  dense.half_width = 2.0;
  dense.heading_drift = 0.0;
  const auto scene = gdm::make_corridor_scene(dense, 5);
  const auto map = gdm::prepare_training_map(scene.cloud, scene.path, 2.0, {});
  const auto stats = gdm::corpus_stats({map});
  CHECK(stats.mean_points_per_group > 100.0);
  // Unit Voronoi cells over a uniform fill: per-axis std near 1/sqrt(12).
  CHECK(stats.mean_axis_std.x() > 0.15);
  CHECK(stats.mean_axis_std.x() < 0.45);
  CHECK(stats.mean_axis_std.y() > 0.15);
  CHECK(stats.mean_axis_std.y() < 0.45);
  CHECK(stats.mean_axis_std.z() >= 0.0);
  CHECK(stats.mean_axis_std.z() < 0.25);

  for (const auto& g : gdm::group_axis_std(map)) {
    CHECK(g.x() < 0.6);
    CHECK(g.y() < 0.6);
  }
}
