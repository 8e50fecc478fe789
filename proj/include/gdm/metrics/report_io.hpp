// SPDX-FileCopyrightText: 2026 gdm contributors
// SPDX-License-Identifier: Apache-2.0
//
// EvalReport serialization: a flat key/value text form and JSON. The JSON
// schema is documented in the project README.

#ifndef GDM_METRICS_REPORT_IO_HPP
#define GDM_METRICS_REPORT_IO_HPP

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gdm/error.hpp"
#include "gdm/metrics/metrics.hpp"

namespace gdm {

inline nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json iou = nlohmann::json::object();
  for (const auto& [resolution, pct] : report.iou_pct) {
    std::ostringstream key;
    key << resolution;
    iou[key.str()] = pct;
  }
  return {{"chamfer_m", report.chamfer_m},
          {"iou_pct", iou},
          {"runtime_s", report.runtime_s},
          {"generated_points", report.generated_points},
          {"truth_points", report.truth_points}};
}

inline std::string to_text(const EvalReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  out << "chamfer_m " << report.chamfer_m << "\n";
  for (const auto& [resolution, pct] : report.iou_pct) {
    out << "iou_pct@" << std::setprecision(2) << resolution << "m "
        << std::setprecision(6) << pct << "\n";
  }
  out << "runtime_s " << report.runtime_s << "\n";
  out << "generated_points " << report.generated_points << "\n";
  out << "truth_points " << report.truth_points << "\n";
  return out.str();
}

inline void write_report(const std::string& json_path,
                         const std::string& text_path,
                         const EvalReport& report) {
  {
    std::ofstream out(json_path);
    if (!out) throw InvalidArgument("cannot write " + json_path);
    out << to_json(report).dump(2) << "\n";
  }
  {
    std::ofstream out(text_path);
    if (!out) throw InvalidArgument("cannot write " + text_path);
    out << to_text(report);
  }
}

}  // namespace gdm

#endif  // GDM_METRICS_REPORT_IO_HPP
