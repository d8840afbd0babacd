#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "bounds/core.hpp"

namespace bounds::dynamics {

/// Kinematic quantities a flying-agent model exposes to the measurement
/// catalogue. Models leave unavailable quantities empty.
struct FlightQuantities {
  std::optional<double> vx;
  std::optional<double> vy;
  std::optional<double> psi;
  std::optional<double> psi_dot;
  std::optional<double> wind_speed;
  std::optional<double> wind_direction;
  std::optional<double> z;
  std::optional<double> vx_dot;
  std::optional<double> vy_dot;
};

/// A discrete-time system x_{k+1} = f(x_k, u_k; dt), y_k = h(x_k, u_k) with
/// labeled state, input, and measurement spaces. Immutable once built and
/// safe to share between threads; step and measure are pure.
class SystemModel {
 public:
  using StepMap = std::function<Vector(const Vector& x, const Vector& u, double dt)>;
  using MeasureMap = std::function<Vector(const Vector& x, const Vector& u)>;
  using FlightQuantityMap = std::function<FlightQuantities(const Vector& x, const Vector& u)>;
  using Params = std::map<std::string, double>;

  struct Definition {
    std::string name;
    LabelList states;
    LabelList inputs;
    LabelList measurements;
    StepMap step;
    MeasureMap measure;
    Params params;
    /// Input that holds the model at rest (hover thrust etc.). Zero if empty.
    Vector trim_input;
    FlightQuantityMap flight_quantities;
  };

  explicit SystemModel(Definition def);

  const std::string& name() const { return def_.name; }
  const LabelList& state_labels() const { return def_.states; }
  const LabelList& input_labels() const { return def_.inputs; }
  const LabelList& measurement_labels() const { return def_.measurements; }
  const Params& params() const { return def_.params; }
  const Vector& trim_input() const { return def_.trim_input; }
  bool has_flight_quantities() const { return static_cast<bool>(def_.flight_quantities); }

  std::size_t state_dim() const { return def_.states.size(); }
  std::size_t input_dim() const { return def_.inputs.size(); }
  std::size_t measurement_dim() const { return def_.measurements.size(); }

  /// One zero-order-hold step. Rejects dt <= 0, wrong sizes, and non-finite
  /// components, naming the offending label.
  Vector step(const Vector& x, const Vector& u, double dt) const;
  Vector measure(const Vector& x, const Vector& u) const;
  FlightQuantities flight_quantities(const Vector& x, const Vector& u) const;

  /// Same dynamics with a different measurement map.
  SystemModel with_measurements(LabelList labels, MeasureMap measure) const;
  /// Same model with a different step map (used for re-parameterized models).
  const StepMap& step_map() const { return def_.step; }
  const MeasureMap& measure_map() const { return def_.measure; }
  const Definition& definition() const { return def_; }

 private:
  void check_sizes(const Vector& x, const Vector& u) const;
  Definition def_;
};

/// Simulates `steps` transitions from x0 holding inputs.row(k) over step k.
/// Returns (steps + 1) x n states, row k = x_k.
Matrix simulate(const SystemModel& model, const Vector& x0, const Matrix& inputs, double dt);

}  // namespace bounds::dynamics
