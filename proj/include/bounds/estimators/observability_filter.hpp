#pragma once

#include <optional>

#include "bounds/core.hpp"

namespace bounds::estimators {

/// Variance thresholds (squared state units) for the observability weight.
struct AlphaMapping {
  double v_low = 1e-2;
  double v_high = 1e2;

  void validate() const;
};

/// alpha = clip((log v_high - log v) / (log v_high - log v_low), 0, 1).
/// Small estimated variance (high observability) trusts the raw estimate.
double alpha_from_observability(double variance, const AlphaMapping& mapping);

/// Adaptive first-order filter x_hat = alpha x_raw + (1 - alpha) x_hat_prev.
/// Angles are filtered on their (cos, sin) embedding and renormalized.
class ObservabilityFilterState {
 public:
  explicit ObservabilityFilterState(bool angle, AlphaMapping mapping = {});

  bool angle() const { return angle_; }
  const AlphaMapping& mapping() const { return mapping_; }
  bool initialized() const { return estimate_.has_value(); }
  /// Current estimate (angle in (-pi, pi] for angle filters).
  double value() const;
  /// Previous estimate, if at least two steps were taken.
  std::optional<double> previous() const;
  /// Unit vector (cos, sin) for angle filters, the scalar in [0] otherwise.
  const Eigen::Vector2d& embedding() const;

  /// Seeds the estimate without filtering.
  void reset(double value);

  /// One update. The first call adopts the raw value (there is no history
  /// to blend with). If the blended unit vectors cancel, the previous
  /// estimate is held.
  double step(double raw, double alpha);

 private:
  bool angle_;
  AlphaMapping mapping_;
  std::optional<Eigen::Vector2d> estimate_;
  std::optional<Eigen::Vector2d> previous_;
};

/// Free-function form of ObservabilityFilterState::step.
double observability_filter_step(ObservabilityFilterState& state, double raw, double alpha);

}  // namespace bounds::estimators
