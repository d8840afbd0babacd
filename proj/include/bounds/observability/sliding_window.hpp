#pragma once

#include <optional>
#include <ostream>

#include "bounds/observability/observability.hpp"
#include "bounds/trajectory/trajectory.hpp"

namespace bounds::observability {

struct SlidingWindowConfig {
  int omega = kDefaultWindow;
  double epsilon = kDefaultEpsilon;
  double lambda = kDefaultLambda;
  /// Per-step measurement noise for the model's full measurement map;
  /// empty means 0.1 I.
  Matrix R_step;
  /// Measurement names to keep. O is computed for the full map and its rows
  /// sliced to these sensors (with the matching block of R_step); empty
  /// keeps every measurement.
  std::vector<std::string> sensors;
  std::optional<CoordinateTransform> transform;
  bool allow_one_sided = false;
  /// Worker threads; 0 picks the hardware concurrency, 1 runs serially.
  unsigned threads = 0;
};

struct WindowVariance {
  Eigen::Index start = 0;
  double t_start = 0.0;
  double t_display = 0.0;  // t_start + omega/2 dt
  MinErrorVariance mev;
  std::vector<std::string> warnings;
};

struct SlidingWindowResult {
  LabelList labels;  // states (or transformed coordinates)
  int omega = 0;
  double lambda = 0.0;
  std::vector<WindowVariance> windows;

  /// Variance series of one state across windows.
  Vector series(std::string_view name) const;
};

/// Minimum error variance in every window of length omega along the
/// trajectory's states and inputs. Windows are independent and may run in
/// parallel; results are in window order and identical to a serial run.
SlidingWindowResult sliding_window_variance(const dynamics::SystemModel& model,
                                            const trajectory::Trajectory& traj,
                                            const SlidingWindowConfig& cfg);

/// CSV with columns t_start, t_display, var_<state>..., saturated_<state>...
void write_variance_csv(const SlidingWindowResult& result, std::ostream& out);

}  // namespace bounds::observability
