#pragma once

#include <map>
#include <string>

#include "bounds/core.hpp"
#include "bounds/dynamics/system_model.hpp"
#include "bounds/trajectory/setpoints.hpp"

namespace bounds::mpc {

/// What the input penalty acts on. `rate` penalizes changes between
/// consecutive inputs; `trim_deviation` penalizes distance from the model's
/// trim input.
enum class InputPenalty { rate, trim_deviation };

struct MpcConfig {
  int horizon = 10;
  /// Weights per tracked state label. Channels absent from the setpoints are
  /// skipped.
  std::map<std::string, double> setpoint_weights = {
      {"v_x", 1.0}, {"v_y", 1.0}, {"psi", 1.0}, {"z", 1.0}, {"w", 1.0}, {"zeta", 1.0}};
  /// Weight per input label; inputs not listed use `default_input_weight`.
  std::map<std::string, double> input_weights;
  double default_input_weight = 1e-2;
  InputPenalty penalty = InputPenalty::rate;
  int max_iterations = 50;
  /// Converged when an accepted step lowers the cost by less than this
  /// fraction.
  double tolerance = 1e-9;
  double fd_step = 1e-6;
  /// When a horizon solve hits the iteration cap, apply its best inputs and
  /// continue instead of throwing MpcNonConvergence. Capped steps are
  /// counted in MpcResult::capped_steps.
  bool accept_best_on_cap = false;

  void validate() const;
};

struct MpcResult {
  Matrix inputs;  // (K-1) x m, row k applied over step k
  Matrix states;  // K x n, simulate(model, x0, inputs)
  std::map<std::string, double> rms_error;  // per tracked variable
  int max_iterations_used = 0;
  int capped_steps = 0;
};

/// Raised when a horizon solve hits the iteration cap. Carries the best
/// cost and horizon inputs found so far.
class MpcNonConvergence : public NumericalError {
 public:
  MpcNonConvergence(const std::string& what, double best_cost, Matrix best_inputs,
                    Eigen::Index step)
      : NumericalError(what), best_cost(best_cost), best_inputs(std::move(best_inputs)),
        step(step) {}
  double best_cost;
  Matrix best_inputs;
  Eigen::Index step;
};

/// Receding-horizon tracking with full state feedback. At each step k the
/// inputs over the next H steps minimize weighted squared setpoint error plus
/// the input penalty; the first input is applied.
MpcResult solve_tracking(const dynamics::SystemModel& model,
                         const trajectory::SetpointSeries& setpoints, const Vector& x0,
                         const MpcConfig& cfg = {});

/// Copies setpoint values at k = 0 into the matching states of `base`.
Vector initial_state_from_setpoints(const dynamics::SystemModel& model,
                                    const trajectory::SetpointSeries& setpoints,
                                    const Vector& base);

}  // namespace bounds::mpc
