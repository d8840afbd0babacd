#pragma once

#include <map>
#include <string>

#include "bounds/trajectory/trajectory.hpp"

namespace bounds::trajectory {

/// Scale commonly applied to camera optic flow to bring it to 1/s.
inline constexpr double kOpticFlowScale = 0.057;

/// Expected CSV layout. Columns are `t`, then state names, input names, and
/// measurement names prefixed `y_`. Measured files may omit state columns.
struct CsvSchema {
  LabelList states;
  LabelList inputs;
  LabelList measurements;
  /// Multiplies a measurement column on ingest (keyed by label name).
  std::map<std::string, double> scales;
  double jitter_tolerance = 0.01;  // fraction of dt
};

CsvSchema schema_for(const Trajectory& traj);

Trajectory ingest_csv(const std::string& path, const CsvSchema& schema);
Trajectory parse_csv(std::istream& in, const CsvSchema& schema, const std::string& source_id);

void export_csv(const Trajectory& traj, const std::string& path);
void write_csv(const Trajectory& traj, std::ostream& out);

/// Formats a double with 17 significant digits.
std::string format_double(double value);

}  // namespace bounds::trajectory
