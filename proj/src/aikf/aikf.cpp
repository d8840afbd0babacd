#include "bounds/aikf/aikf.hpp"

#include <algorithm>
#include <cmath>

namespace bounds::aikf {

void AugmentationSpec::validate() const {
  if (!(rho_min > 0.0) || !(rho_min < rho_max) || !std::isfinite(rho_max)) {
    throw InputError("augmentation needs 0 < rho_min < rho_max");
  }
  if (!(accel_min < accel_max) || !std::isfinite(accel_min) || !std::isfinite(accel_max)) {
    throw InputError("augmentation needs acceleration bounds min < max");
  }
  if (state_index < 0) throw InputError("augmentation state index must be non-negative");
  if (!(std::abs(correlation) < 1.0)) throw InputError("augmentation correlation must lie in (-1, 1)");
}

double r_map_sigma(double mean_abs_accel, const AugmentationSpec& spec) {
  spec.validate();
  const double sigma = (spec.accel_max - mean_abs_accel) / (spec.accel_max - spec.accel_min);
  return std::clamp(sigma, 0.0, 1.0);
}

double r_map(double mean_abs_accel, const AugmentationSpec& spec) {
  const double sigma = r_map_sigma(mean_abs_accel, spec);
  // Interpolate in log space to keep the extremes exact.
  return std::exp((1.0 - sigma) * std::log(spec.rho_min) + sigma * std::log(spec.rho_max));
}

EstimatorWindow::EstimatorWindow(Eigen::Index capacity, Eigen::Index features)
    : capacity_(capacity), features_(features) {
  if (capacity < 1 || features < 1) throw InputError("estimator window needs positive size");
}

void EstimatorWindow::push(const Vector& row) {
  if (row.size() != features_) {
    throw InputError("estimator window row has " + std::to_string(row.size()) + " features, expected " +
                     std::to_string(features_));
  }
  rows_.push_back(row);
  if (static_cast<Eigen::Index>(rows_.size()) > capacity_) rows_.pop_front();
}

Vector EstimatorWindow::flatten() const {
  Vector out(size() * features_);
  Eigen::Index k = 0;
  for (const auto& r : rows_) out.segment(k++ * features_, features_) = r;
  return out;
}

double EstimatorWindow::mean_abs(Eigen::Index feature) const {
  if (feature < 0 || feature >= features_) throw InputError("estimator window feature out of range");
  if (rows_.empty()) throw InputError("estimator window is empty");
  double sum = 0.0;
  for (const auto& r : rows_) sum += std::abs(r[feature]);
  return sum / static_cast<double>(rows_.size());
}

FilterState aikf_step_with_variance(const FilterState& fs, const dynamics::SystemModel& model,
                                    const Vector& u, const Vector& y, double dt, double estimate,
                                    double variance, const AugmentationSpec& spec) {
  spec.validate();
  if (spec.state_index >= fs.dim()) throw InputError("augmentation state index outside the state");
  if (!std::isfinite(estimate)) throw NumericalError("augmented estimate is not finite");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InputError("augmented noise variance must be positive and finite");
  }
  const FilterState predicted = ukf_predict(fs, model, u, dt);

  const Eigen::Index p = y.size();
  Vector y_aug(p + 1);
  y_aug << y, estimate;
  Matrix R_aug = Matrix::Zero(p + 1, p + 1);
  R_aug.topLeftCorner(p, p) = fs.R;
  R_aug(p, p) = variance;
  if (spec.correlation != 0.0) {
    for (Eigen::Index i = 0; i < p; ++i) {
      const double c = spec.correlation * std::sqrt(fs.R(i, i) * variance);
      R_aug(i, p) = c;
      R_aug(p, i) = c;
    }
  }

  const MeasurementMap base = model_measurement_map(model);
  MeasurementMap augmented;
  augmented.labels = base.labels;
  augmented.labels.push_back(model.state_labels()[static_cast<std::size_t>(spec.state_index)]);
  const Eigen::Index idx = spec.state_index;
  augmented.h = [&base, idx](const Vector& x, const Vector& uu) {
    const Vector h = base.h(x, uu);
    Vector out(h.size() + 1);
    out << h, x[idx];
    return out;
  };
  return ukf_update(predicted, augmented, u, y_aug, &R_aug);
}

FilterState aikf_step(const FilterState& fs, const dynamics::SystemModel& model, const Vector& u,
                      const Vector& y, double dt, const EstimatorWindow& window,
                      const AugmentationSpec& spec, AugmentationInfo* info) {
  spec.validate();
  if (!spec.net) throw InputError("augmentation has no estimator network");
  if (!window.full()) {
    if (info) *info = AugmentationInfo{};
    return ukf_step(fs, model, u, y, dt);
  }
  const Vector features = window.flatten();
  const double estimate = spec.net->forward(features)[0];
  const double mean_accel = window.mean_abs(spec.accel_feature);
  const double sigma = r_map_sigma(mean_accel, spec);
  const double variance = r_map(mean_accel, spec);
  if (info) *info = AugmentationInfo{true, estimate, variance, sigma};
  return aikf_step_with_variance(fs, model, u, y, dt, estimate, variance, spec);
}

}  // namespace bounds::aikf
