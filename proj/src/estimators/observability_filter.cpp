#include "bounds/estimators/observability_filter.hpp"

#include <algorithm>
#include <cmath>

namespace bounds::estimators {
namespace {

Eigen::Vector2d embed(bool angle, double v) {
  return angle ? Eigen::Vector2d(std::cos(v), std::sin(v)) : Eigen::Vector2d(v, 0.0);
}

double unembed(bool angle, const Eigen::Vector2d& e) {
  return angle ? std::atan2(e[1], e[0]) : e[0];
}

}  // namespace

void AlphaMapping::validate() const {
  if (!(v_low > 0.0) || !(v_high > v_low)) {
    throw InputError("alpha mapping needs 0 < v_low < v_high");
  }
}

double alpha_from_observability(double variance, const AlphaMapping& mapping) {
  mapping.validate();
  if (!(variance > 0.0)) throw InputError("estimated variance must be positive");
  const double a = (std::log(mapping.v_high) - std::log(variance)) /
                   (std::log(mapping.v_high) - std::log(mapping.v_low));
  return std::clamp(a, 0.0, 1.0);
}

ObservabilityFilterState::ObservabilityFilterState(bool angle, AlphaMapping mapping)
    : angle_(angle), mapping_(mapping) {
  mapping_.validate();
}

double ObservabilityFilterState::value() const {
  if (!estimate_) throw InputError("observability filter has no estimate yet");
  return unembed(angle_, *estimate_);
}

std::optional<double> ObservabilityFilterState::previous() const {
  if (!previous_) return std::nullopt;
  return unembed(angle_, *previous_);
}

const Eigen::Vector2d& ObservabilityFilterState::embedding() const {
  if (!estimate_) throw InputError("observability filter has no estimate yet");
  return *estimate_;
}

void ObservabilityFilterState::reset(double value) {
  previous_.reset();
  estimate_ = embed(angle_, value);
}

double ObservabilityFilterState::step(double raw, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
  if (!std::isfinite(raw)) throw NumericalError("raw estimate is not finite");
  const Eigen::Vector2d x = embed(angle_, raw);
  if (!estimate_) {
    estimate_ = x;
    return value();
  }
  Eigen::Vector2d blended = alpha * x + (1.0 - alpha) * *estimate_;
  if (angle_) {
    const double norm = blended.norm();
    blended = norm > 1e-12 ? Eigen::Vector2d(blended / norm) : *estimate_;
  }
  previous_ = estimate_;
  estimate_ = blended;
  return value();
}

double observability_filter_step(ObservabilityFilterState& state, double raw, double alpha) {
  return state.step(raw, alpha);
}

}  // namespace bounds::estimators
