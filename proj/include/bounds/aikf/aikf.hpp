#pragma once

#include <deque>
#include <memory>
#include <optional>

#include "bounds/aikf/ukf.hpp"
#include "bounds/estimators/net.hpp"

namespace bounds::aikf {

/// Data-driven augmentation of the measurement vector with one state
/// estimate whose noise variance follows the window's mean acceleration.
struct AugmentationSpec {
  std::shared_ptr<const estimators::EstimatorNet> net;
  Eigen::Index state_index = 0;  // state the net estimates
  double rho_min = 1e-3;
  double rho_max = 1e12;
  double accel_min = 0.0;  // min |vdot_x| used to normalize the window mean
  double accel_max = 1.0;  // max |vdot_x|
  Eigen::Index accel_feature = 1;  // column of the window rows holding vdot_x
  /// Constant correlation between the augmented estimate and each original
  /// measurement; 0 keeps the augmented block diagonal.
  double correlation = 0.0;

  void validate() const;
};

/// Exponent sigma in [0, 1]: 0 at the maximum acceleration, 1 at the minimum.
double r_map_sigma(double mean_abs_accel, const AugmentationSpec& spec);
/// Augmented noise variance rho_min^(1 - sigma) rho_max^sigma.
double r_map(double mean_abs_accel, const AugmentationSpec& spec);

/// The most recent `capacity` estimator feature rows (oldest first).
class EstimatorWindow {
 public:
  EstimatorWindow(Eigen::Index capacity, Eigen::Index features);

  void push(const Vector& row);
  bool full() const { return static_cast<Eigen::Index>(rows_.size()) == capacity_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(rows_.size()); }
  Eigen::Index capacity() const { return capacity_; }
  void clear() { rows_.clear(); }

  /// Time-major flattening: row k feature j lands at k * features + j.
  Vector flatten() const;
  double mean_abs(Eigen::Index feature) const;

 private:
  Eigen::Index capacity_;
  Eigen::Index features_;
  std::deque<Vector> rows_;
};

/// What the augmentation contributed at one step.
struct AugmentationInfo {
  bool applied = false;   // false while the window is still filling
  double estimate = 0.0;  // network output
  double variance = 0.0;  // augmented noise variance
  double sigma = 0.0;
};

/// Predicts with u, then updates with [y; z_check] against [h(x, u); x_i]
/// where z_check is the network estimate over `window`. Runs a plain UKF
/// step until the window is full.
FilterState aikf_step(const FilterState& fs, const dynamics::SystemModel& model, const Vector& u,
                      const Vector& y, double dt, const EstimatorWindow& window,
                      const AugmentationSpec& spec, AugmentationInfo* info = nullptr);

/// Same with the augmented variance fixed (bypasses r_map).
FilterState aikf_step_with_variance(const FilterState& fs, const dynamics::SystemModel& model,
                                    const Vector& u, const Vector& y, double dt, double estimate,
                                    double variance, const AugmentationSpec& spec);

}  // namespace bounds::aikf
