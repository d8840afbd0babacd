#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bounds/core.hpp"
#include "bounds/dynamics/system_model.hpp"
#include "bounds/estimators/net.hpp"
#include "bounds/estimators/observability_filter.hpp"
#include "bounds/estimators/training.hpp"
#include "bounds/mpc/mpc.hpp"
#include "bounds/trajectory/setpoints.hpp"
#include "bounds/trajectory/trajectory.hpp"

namespace bounds::estimators {

/// Derives the seed of item `index` from a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// ---------------------------------------------------------------------------
// Wind direction
// ---------------------------------------------------------------------------

inline constexpr int kWindSensors = 3;  // psi, beta, gamma
inline constexpr int kWindNetWindow = 4;

/// 12 -> 64 -> 64 -> 64 -> 1 wind-direction network. Inputs are time-major
/// (psi, beta, gamma) over the window; headings are taken relative to the
/// first heading and the output is shifted back to the world frame.
EstimatorNet make_wind_net(std::uint64_t seed);
/// Same inputs, predicting log10 of the wind-direction minimum error
/// variance.
EstimatorNet make_wind_observability_net(std::uint64_t seed);

/// Packs one wind-net input row from a trajectory with measurement columns
/// psi, beta, gamma, starting at row `start`.
Vector wind_window(const trajectory::Trajectory& traj, Eigen::Index start);

struct WindDatasetConfig {
  int trajectories = 2000;
  Eigen::Index length = 21;  // samples per trajectory
  double dt = 0.1;
  int observability_window = 5;
  double epsilon = 1e-5;
  double lambda = 1e-6;
  double noise_variance = 0.1;
  trajectory::RandomTrajectoryRanges ranges;
  mpc::MpcConfig mpc = [] {
    mpc::MpcConfig c;
    c.accept_best_on_cap = true;
    return c;
  }();
  std::uint64_t seed = 0;
  int threads = 0;

  void validate() const;
};

/// Wind samples: one per window start that admits both the net window and
/// the observability window. Targets are the wind direction at the window
/// start; observability is its minimum error variance. Trajectories whose
/// tracking or observability computation fails are skipped; `skipped` holds
/// one diagnostic per skipped trajectory.
struct WindDataset {
  TrainingDataset data;
  std::vector<std::string> skipped;
};

WindDataset build_wind_dataset(const WindDatasetConfig& config);

/// Observability-estimator view: same inputs, targets log10(variance).
TrainingDataset log_observability_targets(const TrainingDataset& data);

/// Variable-wind scenario with sporadic heading turns: wind direction and
/// speed drift slowly while the agent flies straight between turns.
struct VariableWindScenario {
  double duration = 60.0;  // s
  double dt = 0.1;
  double speed = 1.0;
  double altitude = 2.0;
  double heading = 0.0;
  double wind_speed = 1.0;
  double wind_speed_amplitude = 0.2;
  double wind_direction = 0.5;
  double wind_direction_amplitude = 0.3;
  double wind_period = 120.0;  // s
  std::vector<double> turn_times = {8.0, 21.0, 33.0, 47.0};
  std::vector<double> turn_amplitudes = {1.5707963267948966, -1.5707963267948966,
                                         1.5707963267948966, -1.5707963267948966};
  double turn_duration = 2.0;
};

struct VariableWindRun {
  trajectory::Trajectory trajectory;  // measurements psi, beta, gamma
  trajectory::SetpointSeries setpoints;
};

VariableWindRun simulate_variable_wind(const VariableWindScenario& scenario,
                                       const mpc::MpcConfig& mpc_config = {});

struct FilterSeriesRow {
  double t;
  double zeta_true;
  double zeta_raw;
  double zeta_filtered;
  double alpha;
};

/// Runs the wind net over every window of `traj` and blends the raw
/// estimates with the observability filter. `variance_for_window` gives the
/// (estimated) wind-direction variance used for alpha at each window start;
/// rows are stamped at the window's last sample so the filter is causal.
std::vector<FilterSeriesRow> run_observability_filter(
    const trajectory::Trajectory& traj, const EstimatorNet& wind_net,
    const Vector& variance_per_window, const AlphaMapping& mapping);

// ---------------------------------------------------------------------------
// Altitude
// ---------------------------------------------------------------------------

inline constexpr int kAltitudeNetWindow = 20;

/// 40 -> 64 -> 64 -> 64 -> 1 altitude network; inputs are time-major
/// (r_x, vdot_x) over the window.
EstimatorNet make_altitude_net(std::uint64_t seed);

struct AltitudeDatasetConfig {
  int trajectories = 2000;
  Eigen::Index length = 111;
  double dt = 0.1;
  trajectory::Range altitude{0.5, 20.0};
  trajectory::SumOfSinesSpec velocity;
  std::uint64_t seed = 0;
};

/// Planar-model trajectories at constant altitude with band-limited forward
/// velocity. One sample per sample index with a full window of prior
/// samples; targets are the altitude.
TrainingDataset build_altitude_dataset(const AltitudeDatasetConfig& config);

/// Sets the net's input normalization to the per-column mean and standard
/// deviation of `inputs` (zero deviations become 1).
void fit_input_normalization(EstimatorNet& net, const Matrix& inputs);

}  // namespace bounds::estimators
