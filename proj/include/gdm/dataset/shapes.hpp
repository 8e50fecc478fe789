// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// Synthetic any-shape noisy maps: an outline is laid out, filled with
// points at fixed intervals, and perturbed with Gaussian noise. The clean
// lattice doubles as the central points for the denoising chain.

#ifndef GDM_DATASET_SHAPES_HPP
#define GDM_DATASET_SHAPES_HPP

#include <cmath>
#include <string>
#include <vector>

#include "gdm/core/point.hpp"
#include "gdm/error.hpp"
#include "gdm/rng.hpp"

namespace gdm {

enum class ShapeKind { Line, Curve, Ring, Square };

inline std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Line: return "line";
    case ShapeKind::Curve: return "curve";
    case ShapeKind::Ring: return "ring";
    case ShapeKind::Square: return "square";
  }
  return "?";
}

inline ShapeKind shape_kind_from_string(const std::string& name) {
  if (name == "line") return ShapeKind::Line;
  if (name == "curve") return ShapeKind::Curve;
  if (name == "ring") return ShapeKind::Ring;
  if (name == "square") return ShapeKind::Square;
  throw InvalidArgument("unknown shape kind '" + name +
                        "' (valid: line, curve, ring, square)");
}

/**
 * Shape outline parameters, meters. Which fields apply depends on `kind`:
 * line/curve use length and width, curve adds amplitude and wavelength,
 * ring uses diameter, square uses side.
 */
struct ShapeSpec {
  ShapeKind kind = ShapeKind::Line;
  double length = 200.0;
  double width = 20.0;
  double amplitude = 30.0;
  double wavelength = 100.0;
  double diameter = 120.0;
  double side = 200.0;
  double spacing = 1.0;
  double noise_scale = 1.0;

  void validate() const {
    if (!(spacing > 0.0)) throw InvalidArgument("ShapeSpec: spacing must be > 0");
    if (noise_scale < 0.0) throw InvalidArgument("ShapeSpec: negative noise scale");
    switch (kind) {
      case ShapeKind::Line:
        if (!(length > 0.0) || !(width > 0.0)) {
          throw InvalidArgument("ShapeSpec: line needs positive length/width");
        }
        break;
      case ShapeKind::Curve:
        if (!(length > 0.0) || !(width > 0.0) || !(wavelength > 0.0)) {
          throw InvalidArgument("ShapeSpec: curve needs positive dimensions");
        }
        break;
      case ShapeKind::Ring:
        if (!(diameter > 0.0)) {
          throw InvalidArgument("ShapeSpec: ring needs positive diameter");
        }
        break;
      case ShapeKind::Square:
        if (!(side > 0.0)) {
          throw InvalidArgument("ShapeSpec: square needs positive side");
        }
        break;
    }
  }
};

struct SynthShape {
  PointCloud noisy;
  PointCloud clean;
  std::vector<Vec3> centers;  // the lattice points, for the denoising chain
};

/// Deterministic lattice fill of the outline; noise deterministic in seed.
inline SynthShape synth_shape(const ShapeSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<Vec3> clean;

  const double h = spec.spacing;
  auto steps = [&](double extent) {
    return static_cast<long>(std::floor(extent / h + 1e-9));
  };

  switch (spec.kind) {
    case ShapeKind::Line: {
      const long nx = steps(spec.length);
      const long ny = steps(spec.width);
      for (long i = 0; i <= nx; ++i) {
        for (long j = 0; j <= ny; ++j) {
          clean.emplace_back(i * h, j * h - spec.width / 2.0, 0.0);
        }
      }
      break;
    }
    case ShapeKind::Curve: {
      const long nx = steps(spec.length);
      const long ny = steps(spec.width);
      for (long i = 0; i <= nx; ++i) {
        const double x = i * h;
        const double bend =
            spec.amplitude * std::sin(2.0 * M_PI * x / spec.wavelength);
        for (long j = 0; j <= ny; ++j) {
          clean.emplace_back(x, j * h - spec.width / 2.0 + bend, 0.0);
        }
      }
      break;
    }
    case ShapeKind::Ring: {
      const double radius = spec.diameter / 2.0;
      const long n =
          std::max<long>(3, std::lround(2.0 * M_PI * radius / h));
      for (long i = 0; i < n; ++i) {
        const double angle = 2.0 * M_PI * static_cast<double>(i) / n;
        clean.emplace_back(radius * std::cos(angle), radius * std::sin(angle), 0.0);
      }
      break;
    }
    case ShapeKind::Square: {
      const long n = steps(spec.side);
      for (long i = 0; i <= n; ++i) {
        for (long j = 0; j <= n; ++j) {
          clean.emplace_back(i * h, j * h, 0.0);
        }
      }
      break;
    }
  }

  SynthShape out;
  out.centers = clean;
  out.clean = PointCloud(clean);
  RandomStream rng(seed);
  std::vector<Vec3> noisy;
  noisy.reserve(clean.size());
  for (const Vec3& p : clean) {
    noisy.push_back(p + spec.noise_scale *
                            Vec3(rng.normal(), rng.normal(), rng.normal()));
  }
  out.noisy = PointCloud(std::move(noisy));
  return out;
}

}  // namespace gdm

#endif  // GDM_DATASET_SHAPES_HPP
