// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GDM_ERROR_HPP
#define GDM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gdm {

/// Base class for all gdm errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An operation received an empty cloud, group list, or hit set.
class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what) : Error(what) {}
};

/// A parameter violates the operation's contract (bad range, shape mismatch).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// Centroid requested for a group with no points.
class DegenerateGroup : public Error {
 public:
  explicit DegenerateGroup(const std::string& what) : Error(what) {}
};

/// Path tangent has no horizontal projection; no normal can be defined.
class DegenerateTangent : public Error {
 public:
  explicit DegenerateTangent(const std::string& what) : Error(what) {}
};

/// Schedule coefficient makes the requested inversion undefined.
class DegenerateSchedule : public Error {
 public:
  explicit DegenerateSchedule(const std::string& what) : Error(what) {}
};

/// Malformed input file. Carries the path and, when known, the 1-based line.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : "") + ": " + what),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// A pose references a scan file that does not exist.
class MissingScan : public Error {
 public:
  explicit MissingScan(const std::string& what) : Error(what) {}
};

/// Checkpoint was produced under settings the current pipeline cannot accept.
class IncompatibleCheckpoint : public Error {
 public:
  explicit IncompatibleCheckpoint(const std::string& what) : Error(what) {}
};

/// Training produced a non-finite loss. Carries the offending step index.
class TrainingDiverged : public Error {
 public:
  TrainingDiverged(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// A numeric intermediate became NaN or infinite.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

}  // namespace gdm

#endif  // GDM_ERROR_HPP
