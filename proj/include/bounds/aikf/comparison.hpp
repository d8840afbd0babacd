#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bounds/aikf/aikf.hpp"
#include "bounds/dynamics/system_model.hpp"
#include "bounds/estimators/datasets.hpp"
#include "bounds/estimators/training.hpp"

namespace bounds::aikf {

/// Straight, level flight at constant altitude with a deceleration, a cruise
/// gap, and an acceleration back to the cruise speed. Measurements are the
/// forward optic flow r_x and the two accelerations, all with additive
/// Gaussian noise; the vertical acceleration also carries a bias during the
/// gap between the two events.
struct AltitudeScenario {
  double duration = 30.0;  // s
  double dt = 0.1;
  double altitude = 10.0;  // m
  double cruise_speed = 30.0;  // m/s
  double event_start = 8.0;     // s, start of the deceleration
  double event_duration = 3.0;  // s, each of deceleration and acceleration
  double gap_duration = 3.0;    // s between the two events
  double accel_magnitude = 8.0;  // m/s^2
  double noise_variance = 1e-2;
  double bias = 0.3;  // m/s^2 added to the vertical acceleration in the gap
  std::uint64_t seed = 0;

  void validate() const;
  double event_end() const { return event_start + 2.0 * event_duration + gap_duration; }
};

struct AltitudeRun {
  Vector t;
  Matrix states;           // K x 3 true (z, v_z, v_x)
  Matrix inputs;           // K x 2 true (u_z, u_x); row k is held over [t_k, t_k+1)
  Matrix measured_inputs;  // K x 2 noisy accelerometer readings
  Vector optic_flow;       // K noisy r_x
  double event_end = 0.0;
};

AltitudeRun simulate_altitude_scenario(const AltitudeScenario& scenario);

/// The planar (z, v_z, v_x) model with the single measurement r_x.
dynamics::SystemModel altitude_filter_model();

enum class FilterKind { ukf, aikf };
std::string_view to_string(FilterKind kind);

struct FilterInit {
  double z0 = 10.0;
  double P0_scale = 1.0;
  double Q_scale = 1.0;
};

struct FilterSettings {
  Vector P0_base = (Vector(3) << 1.0, 1.0, 1.0).finished();  // diagonal, scaled by P0_scale
  double Q_base = 1e-4;           // Q = Q_scale * Q_base * I
  double optic_flow_variance = 1e-3;  // filter R for r_x
};

struct FilterTrace {
  Matrix means;       // K x 3
  Matrix variances;   // K x 3 (diagonal of P)
  Vector augmented_estimate;  // NaN where the augmentation was not applied
  Vector augmented_variance;
};

/// Runs one filter over a scenario realization. The initial forward speed
/// is taken from the first optic-flow sample and z0.
FilterTrace run_altitude_filter(const AltitudeRun& run, FilterKind kind, const FilterInit& init,
                                const FilterSettings& settings, const AugmentationSpec* spec);

struct ComparisonRow {
  int run_id = 0;
  FilterKind filter = FilterKind::ukf;
  double z0 = 0.0;
  double P0_scale = 0.0;
  double Q_scale = 0.0;
  double median_err_z = 0.0;
  double median_err_vx = 0.0;
  bool converged = false;
  std::string error;  // non-empty when the run failed
};

struct ComparisonGrid {
  std::vector<double> z0 = {2.0, 5.0, 10.0, 20.0, 40.0};
  std::vector<double> P0_scale = {0.1, 1.0, 10.0};
  std::vector<double> Q_scale = {0.1, 1.0, 10.0};
  FilterSettings settings;
  double converged_fraction = 0.1;  // of the true altitude
};

/// Median absolute errors over samples at or after the end of the second
/// event. Every grid cell runs both filters on the same realization.
std::vector<ComparisonRow> run_comparison(const AltitudeRun& run, const ComparisonGrid& grid,
                                          const AugmentationSpec& spec);

/// Acceleration-magnitude sweep: for each magnitude, both filters run on a
/// realization of `base` with that magnitude. The augmentation's
/// acceleration bounds follow each scenario's envelope [0, magnitude]; the
/// zero-acceleration scenario uses the largest magnitude of the sweep.
struct AccelSweepRow {
  double accel = 0.0;
  double z0 = 0.0;
  double median_err_ukf = 0.0;
  double median_err_aikf = 0.0;
};

std::vector<AccelSweepRow> run_accel_sweep(const AltitudeScenario& base, const std::vector<double>& accels,
                                           const std::vector<double>& z0, const FilterSettings& settings,
                                           std::shared_ptr<const estimators::EstimatorNet> net);

/// Augmentation for the altitude net with acceleration bounds [accel_min, accel_max].
AugmentationSpec altitude_augmentation(std::shared_ptr<const estimators::EstimatorNet> net,
                                       double accel_min, double accel_max);

/// Training recipe of the altitude network used by the comparison. The
/// velocity ranges cover the comparison scenario's cruise speed.
struct AltitudeNetRecipe {
  estimators::AltitudeDatasetConfig data = default_data();
  estimators::TrainConfig train = default_train();
  std::uint64_t net_seed = 5;
  double test_fraction = 0.2;
  std::uint64_t split_seed = 1;

  static estimators::AltitudeDatasetConfig default_data();
  static estimators::TrainConfig default_train();
};

estimators::TrainingResult train_altitude_net(const AltitudeNetRecipe& recipe);

void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows,
                          std::uint64_t seed);

}  // namespace bounds::aikf
