#pragma once

#include <functional>

#include "bounds/core.hpp"
#include "bounds/dynamics/system_model.hpp"

namespace bounds::aikf {

/// Scaling of the unscented transform.
struct UnscentedParams {
  double alpha = 1e-3;
  double beta = 1.0;
  double kappa = 0.0;

  void validate(Eigen::Index n) const;
};

/// Sigma-point weights for an n-dimensional transform. Index 0 is the
/// central point; the 2n others share one mean and one covariance weight.
struct UnscentedWeights {
  double lambda;
  double mean0;
  double cov0;
  double rest;  // mean and covariance weight of points 1..2n

  static UnscentedWeights make(Eigen::Index n, const UnscentedParams& params);
  /// Spread of the sigma points: sqrt(n + lambda).
  double spread(Eigen::Index n) const;
};

/// Filter mean and square-root covariance with its noise models. The
/// covariance is carried as a lower-triangular factor S with P = S S^T and a
/// positive diagonal.
struct FilterState {
  Vector mean;
  Matrix sqrt_cov;
  Matrix Q;  // process noise, n x n PSD
  Matrix R;  // measurement noise, p x p SPD
  UnscentedParams unscented;
  /// Optional state labels; angle states are wrapped after each update.
  LabelList state_labels;

  /// Factors P (must be SPD) and checks shapes of Q and R.
  static FilterState make(Vector mean, const Matrix& P, Matrix Q, Matrix R,
                          UnscentedParams unscented = {});

  Matrix covariance() const { return sqrt_cov * sqrt_cov.transpose(); }
  Eigen::Index dim() const { return mean.size(); }
};

/// Measurement map used by the update: y = h(x, u), with labels giving
/// which outputs are angles (innovations of angles are wrapped).
struct MeasurementMap {
  std::function<Vector(const Vector& x, const Vector& u)> h;
  LabelList labels;
};

/// 2n+1 sigma points as columns: x, x + c S_i, x - c S_i with c = spread.
Matrix sigma_points(const Vector& mean, const Matrix& sqrt_cov, const UnscentedParams& params);

/// Rank-one update (sign > 0) or downdate (sign < 0) of a lower Cholesky
/// factor in place: L L^T + sign v v^T. Throws NumericalError when a
/// downdate would leave the factor indefinite.
void cholupdate(Matrix& L, Vector v, double sign);

/// Lower-triangular square root of a symmetric PSD matrix (zero directions
/// allowed). Used for Q.
Matrix psd_sqrt(const Matrix& A);

/// Time update through the model's step map; Q is added in square-root form.
FilterState ukf_predict(const FilterState& fs, const dynamics::SystemModel& model, const Vector& u,
                        double dt);

/// Measurement update against `map` with noise `R` (defaults to fs.R).
FilterState ukf_update(const FilterState& fs, const MeasurementMap& map, const Vector& u,
                       const Vector& y, const Matrix* R = nullptr);

/// Predict over one step with input u, then update with the measurement y
/// taken at the new time using the model's measurement map.
FilterState ukf_step(const FilterState& fs, const dynamics::SystemModel& model, const Vector& u,
                     const Vector& y, double dt);

MeasurementMap model_measurement_map(const dynamics::SystemModel& model);

}  // namespace bounds::aikf
