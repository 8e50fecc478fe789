// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "gdm/stage1/centers.hpp"
#include "gdm/stage1/path.hpp"
#include "oracles.hpp"

using gdm::PathTrack;
using gdm::PointCloud;
using gdm::Vec3;

namespace {

std::vector<Vec3> straight_path(std::size_t n, const Vec3& step,
                                const Vec3& origin = Vec3::Zero()) {
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(origin + static_cast<double>(i) * step);
  }
  return pts;
}

}  // namespace

TEST_CASE("normals: straight path along +x points left (+y)") {
  const auto track = gdm::estimate_tangents_normals(straight_path(10, {1, 0, 0}));
  for (const Vec3& n : track.normals) {
    CHECK((n - Vec3(0, 1, 0)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("normals: straight path along +y points left (-x)") {
  const auto track = gdm::estimate_tangents_normals(straight_path(10, {0, 1, 0}));
  for (const Vec3& n : track.normals) {
    CHECK((n - Vec3(-1, 0, 0)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("normals: orthogonality, unit length, horizontality") {
  // A 3D spiral-ish path with height changes.
  std::vector<Vec3> pts;
  for (int i = 0; i < 50; ++i) {
    const double s = 0.31 * i;
    pts.emplace_back(20 * std::cos(s), 20 * std::sin(s), 0.2 * i);
  }
  const auto track = gdm::estimate_tangents_normals(pts);
  for (std::size_t i = 0; i < track.size(); ++i) {
    CHECK(std::abs(track.normals[i].dot(track.tangents[i])) < 1e-9);
    CHECK(std::abs(track.normals[i].norm() - 1.0) < 1e-12);
    CHECK(track.normals[i].z() == 0.0);
  }
}

TEST_CASE("normals: quarter circle points at the center") {
  // Radius 100, sampled every ~1 m of arc. Walking counterclockwise the
  // center lies to the left, so normals should match (center - point).
  const double radius = 100.0;
  std::vector<Vec3> pts;
  const int samples = 157;  // quarter arc, ~1 m steps
  for (int i = 0; i <= samples; ++i) {
    const double angle = (M_PI / 2.0) * i / samples;
    pts.emplace_back(radius * std::cos(angle), radius * std::sin(angle), 0.0);
  }
  const auto track = gdm::estimate_tangents_normals(pts);
  for (std::size_t i = 0; i < track.size(); ++i) {
    const Vec3 to_center = (Vec3(0, 0, 0) - track.points[i]).normalized();
    const double cosine = track.normals[i].dot(to_center);
    CHECK(std::acos(std::min(1.0, cosine)) < 0.02);
  }
}

TEST_CASE("normals: degenerate vertical tangent") {
  CHECK_THROWS_AS(
      gdm::estimate_tangents_normals({Vec3(0, 0, 0), Vec3(0, 0, 5)}),
      gdm::DegenerateTangent);
}

TEST_CASE("path validation") {
  CHECK_THROWS_AS(gdm::estimate_tangents_normals({Vec3(0, 0, 0)}),
                  gdm::InvalidArgument);
  CHECK_THROWS_AS(
      gdm::estimate_tangents_normals({Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(1, 0, 0)}),
      gdm::InvalidArgument);
}

TEST_CASE("resample_arclength: uniform spacing on a long segment") {
  const auto out = gdm::resample_arclength({Vec3(0, 0, 0), Vec3(10, 0, 0)}, 1.0);
  REQUIRE(out.size() == 11);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].x() == Catch::Approx(static_cast<double>(i)));
  }
  // Irregular input spacing gets evened out.
  const auto uneven = gdm::resample_arclength(
      {Vec3(0, 0, 0), Vec3(0.2, 0, 0), Vec3(5, 0, 0), Vec3(5.1, 0, 0),
       Vec3(9.7, 0, 0)},
      1.0);
  for (std::size_t i = 0; i + 1 < uneven.size(); ++i) {
    CHECK((uneven[i + 1] - uneven[i]).norm() <= 1.0 + 1e-9);
  }
}

TEST_CASE("centers: w = 0 emits only the path points") {
  const auto track = gdm::estimate_tangents_normals(straight_path(2, {1, 0, 0}));
  const auto centers = gdm::centers_from_path(track, {0.0, 0.0});
  CHECK(centers.size() == 2);
}

TEST_CASE("centers: isolated point with w = 20 gives 41 centers") {
  // Two far-apart path points so no dedup interaction; each emits 1 + 2*20.
  const auto track = gdm::estimate_tangents_normals(
      {Vec3(0, 0, 0), Vec3(1000, 0, 0)});
  const auto centers = gdm::centers_from_path(track, {20.0, 0.0});
  CHECK(centers.size() == 41 + 1);

  std::size_t on_y_axis = 0;
  for (const Vec3& c : centers) {
    if (c.x() == 0.0) {
      ++on_y_axis;
      CHECK(std::abs(c.y()) <= 20.0);
    }
  }
  CHECK(on_y_axis == 41);
}

TEST_CASE("centers: 10-point path with w = 2 forms a 10x5 lattice") {
  const auto track = gdm::estimate_tangents_normals(straight_path(10, {1, 0, 0}));
  const auto centers =
      gdm::centers_from_path(track, std::vector<double>(10, 2.0));
  REQUIRE(centers.size() == 50);
  for (const Vec3& c : centers) {
    CHECK(c.x() == Catch::Approx(std::round(c.x())).margin(1e-12));
    CHECK(std::abs(c.y()) <= 2.0 + 1e-12);
  }
}

TEST_CASE("centers: dedup removes coincident corridor points") {
  // Two path points half a meter apart: their corridors overlap heavily.
  const auto track = gdm::estimate_tangents_normals(
      {Vec3(0, 0, 0), Vec3(0.4, 0, 0), Vec3(0.8, 0, 0)});
  const auto centers =
      gdm::centers_from_path(track, std::vector<double>(3, 1.0), 0.5);
  // Without dedup there would be 9 centers; columns 0.4 m apart collapse.
  CHECK(centers.size() < 9);
}

TEST_CASE("estimate_width: perpendicular and on-line hits") {
  const auto track = gdm::estimate_tangents_normals(straight_path(5, {1, 0, 0}));
  CHECK(gdm::estimate_width(track, 2, PointCloud({Vec3(0, 7, 0)})) ==
        Catch::Approx(7.0));
  CHECK(gdm::estimate_width(track, 2, PointCloud({Vec3(100, 0, 0)})) ==
        Catch::Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(gdm::estimate_width(track, 0, PointCloud{}), gdm::EmptyInput);
}

TEST_CASE("estimate_width matches a brute-force min point-to-line oracle") {
  gdm::RandomStream rng(113);
  std::vector<Vec3> pts;
  for (int i = 0; i < 20; ++i) {
    pts.emplace_back(i * 1.0, 3.0 * std::sin(0.3 * i), 0.1 * i);
  }
  const auto track = gdm::estimate_tangents_normals(pts);
  const PointCloud hits = oracle::random_cloud(50, rng, -20.0, 40.0);

  for (std::size_t i = 0; i < track.size(); i += 3) {
    const Vec3 o = track.points[i];
    const Vec3 d = track.tangents[i] / track.tangents[i].norm();
    double expect = std::numeric_limits<double>::infinity();
    for (const Vec3& h : hits) {
      // |v|^2 - (v . d)^2 under a plain loop formulation.
      const double vx = h.x() - o.x(), vy = h.y() - o.y(), vz = h.z() - o.z();
      const double proj = vx * d.x() + vy * d.y() + vz * d.z();
      const double d2 = vx * vx + vy * vy + vz * vz - proj * proj;
      expect = std::min(expect, std::sqrt(std::max(0.0, d2)));
    }
    CHECK(gdm::estimate_width(track, i, hits) ==
          Catch::Approx(expect).margin(1e-9));
  }
}

TEST_CASE("make_mode_widths: fixed, ranged, estimated") {
  const auto track = gdm::estimate_tangents_normals(straight_path(5, {1, 0, 0}));

  const auto m1 = gdm::make_mode_widths(gdm::FixedWidth{20.0}, track, 0);
  CHECK(m1 == std::vector<double>(5, 20.0));

  const auto m2 = gdm::make_mode_widths(gdm::RandomWidth{15.0, 35.0}, track, 42);
  REQUIRE(m2.size() == 5);
  for (double w : m2) {
    CHECK(w >= 15.0);
    CHECK(w < 35.0);
  }
  const auto m2_again =
      gdm::make_mode_widths(gdm::RandomWidth{15.0, 35.0}, track, 42);
  CHECK(m2 == m2_again);

  // Hits at exactly 12 m lateral offset from the straight path.
  gdm::SparseHits hits(
      {Vec3(1.0, 12.0, 0.0), Vec3(2.5, -12.0, 0.0), Vec3(4.0, 12.0, 0.0)});
  const auto m3 = gdm::make_mode_widths(gdm::EstimatedWidth{hits}, track, 0);
  for (double w : m3) {
    CHECK(w == Catch::Approx(12.0));
  }
}

TEST_CASE("make_mode_widths: mode 3 clamps to the cap") {
  const auto track = gdm::estimate_tangents_normals(straight_path(3, {1, 0, 0}));
  gdm::SparseHits far_hit({Vec3(0.0, 500.0, 0.0)});
  const auto widths =
      gdm::make_mode_widths(gdm::EstimatedWidth{far_hit, 50.0}, track, 0);
  CHECK(widths == std::vector<double>(3, 50.0));
}

TEST_CASE("mode validation") {
  const auto track = gdm::estimate_tangents_normals(straight_path(3, {1, 0, 0}));
  CHECK_THROWS_AS(gdm::make_mode_widths(gdm::FixedWidth{0.0}, track, 0),
                  gdm::InvalidArgument);
  CHECK_THROWS_AS(gdm::make_mode_widths(gdm::RandomWidth{5.0, 2.0}, track, 0),
                  gdm::InvalidArgument);
  CHECK_THROWS_AS(gdm::make_mode_widths(gdm::EstimatedWidth{}, track, 0),
                  gdm::EmptyInput);
}

TEST_CASE("mode 3 widths are non-negative and zero-width points still emit") {
  const auto track = gdm::estimate_tangents_normals(straight_path(4, {1, 0, 0}));
  gdm::SparseHits hits({Vec3(2.0, 0.0, 0.0)});  // on the tangent line
  const auto widths = gdm::make_mode_widths(gdm::EstimatedWidth{hits}, track, 0);
  for (double w : widths) {
    CHECK(w >= 0.0);
  }
  const auto centers = gdm::centers_from_path(track, widths);
  CHECK(centers.size() == 4);  // one center per path point survives
}
