#pragma once

#include <cstdint>
#include <string>

#include "bounds/core.hpp"
#include "bounds/dynamics/system_model.hpp"

namespace bounds::trajectory {

struct Provenance {
  enum class Kind { simulated, measured };
  Kind kind = Kind::simulated;
  std::uint64_t seed = 0;      // simulated only
  std::string source_id;       // measured only
};

/// Uniformly sampled series of states, inputs, and measurements. Row k of
/// each array is time t0 + k dt. Measured trajectories may carry a subset of
/// the model's states (possibly none).
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(double dt, double t0, LabelList state_labels, Matrix states, LabelList input_labels,
             Matrix inputs, LabelList measurement_labels, Matrix measurements,
             Provenance provenance);

  double dt() const { return dt_; }
  double t0() const { return t0_; }
  Eigen::Index length() const { return length_; }
  double time(Eigen::Index k) const { return t0_ + static_cast<double>(k) * dt_; }

  const LabelList& state_labels() const { return state_labels_; }
  const LabelList& input_labels() const { return input_labels_; }
  const LabelList& measurement_labels() const { return measurement_labels_; }
  const Matrix& states() const { return states_; }
  const Matrix& inputs() const { return inputs_; }
  const Matrix& measurements() const { return measurements_; }
  const Provenance& provenance() const { return provenance_; }

  bool has_state(std::string_view name) const;
  /// Column lookup by name over states, then inputs, then measurements.
  Vector column(std::string_view name) const;
  Vector state_column(std::string_view name) const;
  Vector measurement_column(std::string_view name) const;

  /// Rows [first, first + count) as a new trajectory.
  Trajectory segment(Eigen::Index first, Eigen::Index count) const;

 private:
  double dt_ = 0.0;
  double t0_ = 0.0;
  Eigen::Index length_ = 0;
  LabelList state_labels_, input_labels_, measurement_labels_;
  Matrix states_, inputs_, measurements_;
  Provenance provenance_;
};

/// Simulates the model from x0 under `inputs` ((K-1) x m) and evaluates its
/// measurement map at every sample. The final input row repeats the last
/// applied input so all arrays share K rows. Angle measurements are unwrapped
/// along time.
Trajectory simulate_trajectory(const dynamics::SystemModel& model, const Vector& x0,
                               const Matrix& inputs, double dt, std::uint64_t seed = 0);

/// Measurement series of a state/input history under the model's map, with
/// angle outputs unwrapped along time.
Matrix measure_series(const dynamics::SystemModel& model, const Matrix& states,
                      const Matrix& inputs);

}  // namespace bounds::trajectory
