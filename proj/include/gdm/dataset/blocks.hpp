// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Block-map construction: poses + per-pose scans are accumulated in world
// frame, segmented by traveled arc length into fixed-length blocks, and
// each block is downsampled to a target point count with farthest point
// sampling. Scan files are little-endian f32 quadruples (x, y, z,
// intensity); intensity is discarded. An xyz-text fallback is accepted.

#ifndef GDM_DATASET_BLOCKS_HPP
#define GDM_DATASET_BLOCKS_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "gdm/core/fps.hpp"
#include "gdm/core/point.hpp"
#include "gdm/error.hpp"
#include "gdm/io/cloud_io.hpp"
#include "gdm/io/path_io.hpp"

namespace gdm {

inline constexpr double kDefaultBlockLength = 150.0;
inline constexpr std::size_t kDefaultBlockTargetPoints = 50000;

/// One ground-truth map chunk with its path segment.
struct BlockMap {
  PointCloud cloud;            // FPS-downsampled ground truth
  std::vector<Vec3> path;      // pose positions inside the block
  std::size_t index = 0;
  double arc_begin = 0.0;      // traveled meters at block start
  double arc_end = 0.0;
};

/// KITTI-style binary scan: little-endian f32 (x, y, z, intensity) records.
inline PointCloud read_scan_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path, 0, "cannot open scan");
  }
  in.seekg(0, std::ios::end);
  const std::streamoff bytes = in.tellg();
  in.seekg(0, std::ios::beg);
  if (bytes % 16 != 0) {
    throw ParseError(path, 0, "scan size is not a multiple of 16 bytes");
  }
  const std::size_t count = static_cast<std::size_t>(bytes / 16);
  std::vector<Vec3> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    float rec[4];
    in.read(reinterpret_cast<char*>(rec), sizeof(rec));
    if (!in) {
      throw ParseError(path, 0, "truncated scan record");
    }
    pts.emplace_back(rec[0], rec[1], rec[2]);  // intensity dropped
  }
  return PointCloud(std::move(pts));
}

namespace detail {

inline std::string find_scan_file(const std::string& scans_dir,
                                  std::size_t pose_index) {
  namespace fs = std::filesystem;
  char name[32];
  const char* patterns[] = {"%010zu.bin", "%06zu.bin", "%010zu.xyz", "%06zu.xyz"};
  for (const char* pattern : patterns) {
    std::snprintf(name, sizeof(name), pattern, pose_index);
    const fs::path candidate = fs::path(scans_dir) / name;
    if (fs::exists(candidate)) {
      return candidate.string();
    }
  }
  return {};
}

inline PointCloud read_scan_any(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".bin") {
    return read_scan_bin(path);
  }
  return read_cloud_xyz(path);
}

}  // namespace detail

/**
 * Build block maps from a pose file and a directory of per-pose scans
 * (scan i named by the pose's line index, 6 or 10 digits, .bin or .xyz).
 *
 * A pose at traveled arc length s belongs to block b with
 * b*L < s <= (b+1)*L (s = 0 -> block 0), so boundary ties go to the lower
 * block. Each block is FPS-downsampled to min(target_points, available).
 * When skip_missing is set, poses without a scan are dropped with a note
 * instead of raising MissingScan.
 */
inline std::vector<BlockMap> build_block_maps(
    const std::string& poses_file, const std::string& scans_dir,
    double block_length = kDefaultBlockLength,
    std::size_t target_points = kDefaultBlockTargetPoints,
    bool skip_missing = false,
    const std::function<void(const std::string&)>& warn = {}) {
  if (!(block_length > 0.0)) {
    throw InvalidArgument("build_block_maps: block length must be > 0");
  }
  const std::vector<Pose> poses = read_poses(poses_file);
  if (poses.size() < 2) {
    throw InvalidArgument("build_block_maps: need at least 2 poses");
  }

  // Traveled arc length per pose, then block assignment.
  std::vector<double> arc(poses.size(), 0.0);
  for (std::size_t i = 1; i < poses.size(); ++i) {
    arc[i] = arc[i - 1] + (poses[i].translation - poses[i - 1].translation).norm();
  }
  auto block_of = [&](double s) -> std::size_t {
    if (s <= 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(s / block_length)) - 1;
  };
  const std::size_t block_count = block_of(arc.back()) + 1;

  std::vector<std::vector<Vec3>> accumulated(block_count);
  std::vector<BlockMap> blocks(block_count);
  for (std::size_t b = 0; b < block_count; ++b) {
    blocks[b].index = b;
    blocks[b].arc_begin = static_cast<double>(b) * block_length;
    blocks[b].arc_end = blocks[b].arc_begin + block_length;
  }

  for (std::size_t i = 0; i < poses.size(); ++i) {
    const std::size_t b = block_of(arc[i]);
    const std::string scan_path = detail::find_scan_file(scans_dir, i);
    if (scan_path.empty()) {
      if (!skip_missing) {
        throw MissingScan("no scan for pose " + std::to_string(i) + " in " +
                          scans_dir);
      }
      if (warn) warn("skipping pose " + std::to_string(i) + ": scan missing");
      continue;
    }
    const PointCloud scan = detail::read_scan_any(scan_path);
    blocks[b].path.push_back(poses[i].translation);
    for (const Vec3& p : scan) {
      accumulated[b].push_back(poses[i].apply(p));
    }
  }

  for (std::size_t b = 0; b < block_count; ++b) {
    PointCloud raw{std::move(accumulated[b])};
    if (raw.empty()) {
      continue;  // a block may be empty when scans were skipped
    }
    if (raw.size() <= target_points) {
      blocks[b].cloud = std::move(raw);
    } else {
      blocks[b].cloud = gather(raw, farthest_point_sample(raw, target_points, 0));
    }
  }
  return blocks;
}

}  // namespace gdm

#endif  // GDM_DATASET_BLOCKS_HPP
