#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bounds/core.hpp"
#include "bounds/dynamics/measurements.hpp"
#include "bounds/dynamics/system_model.hpp"

namespace bounds::observability {

inline constexpr double kDefaultEpsilon = 1e-5;
inline constexpr double kDefaultLambda = 1e-6;
inline constexpr double kDefaultNoiseVariance = 0.1;
inline constexpr int kDefaultWindow = 5;

/// Stacked measurement sensitivities over a window. Row k * p + j holds
/// measurement j at step k; column i is the perturbed initial state i.
struct ObservabilityMatrix {
  Matrix values;
  LabelList state_labels;        // columns
  LabelList measurement_labels;  // p sensors
  std::vector<Eigen::Index> steps;  // window steps present, ascending
  double epsilon = kDefaultEpsilon;
  Eigen::Index window_start = 0;
  std::vector<std::string> warnings;

  Eigen::Index sensor_count() const { return static_cast<Eigen::Index>(measurement_labels.size()); }
  Eigen::Index step_count() const { return static_cast<Eigen::Index>(steps.size()); }
};

struct EmpiricalOptions {
  double epsilon = kDefaultEpsilon;
  /// Use a one-sided difference (with a warning) for magnitude states closer
  /// to zero than epsilon instead of failing.
  bool allow_one_sided = false;
};

/// Central-difference observability matrix of the model's measurement map
/// over `omega` steps from x0. Inputs rows 0..omega-1 are applied unchanged
/// to every perturbed run. Angle measurements are unwrapped against the
/// nominal run before differencing.
ObservabilityMatrix empirical_O(const dynamics::SystemModel& model, const Vector& x0,
                                const Matrix& inputs, double dt, int omega,
                                const EmpiricalOptions& options = {});

/// Same, with the measurement map given by `catalogue`.
ObservabilityMatrix empirical_O(const dynamics::SystemModel& model,
                                const dynamics::MeasurementCatalogue& catalogue,
                                const Vector& x0, const Matrix& inputs, double dt, int omega,
                                const EmpiricalOptions& options = {});

struct FisherInfo {
  Matrix F;        // n x n
  Matrix R_block;  // (p*omega) x (p*omega)
};

/// Block-diagonal noise with `R_step` repeated `steps` times.
Matrix block_noise(const Matrix& R_step, Eigen::Index steps);
/// Per-step noise 0.1 I (the default measurement variance).
Matrix default_noise(Eigen::Index sensors);

/// F = O^T R^-1 O with R = blockdiag(R_step, ..., R_step).
FisherInfo fisher(const ObservabilityMatrix& O, const Matrix& R_step);
/// F = O^T R^-1 O for an explicit full noise matrix.
FisherInfo fisher(const Matrix& O, const Matrix& R);

struct MinErrorVariance {
  Vector variance;
  std::vector<bool> saturated;  // variance >= 0.5 / lambda
  double lambda = kDefaultLambda;
};

struct ChernoffResult {
  Matrix inverse;
  MinErrorVariance mev;
  Vector eigenvalues;  // of F, ascending
  std::vector<std::string> warnings;
};

/// (F + lambda I)^-1 through a Cholesky factorization. Warns when lambda is
/// not below the smallest nonzero eigenvalue of F.
ChernoffResult chernoff_inverse(const Matrix& F, double lambda = kDefaultLambda);

/// Moore-Penrose pseudoinverse, for comparison with the regularized inverse.
Matrix pseudoinverse(const Matrix& F, double rcond = 1e-12);

/// Coordinate change z = T(x). The Jacobian dT/dx is taken from `jacobian`
/// when set, otherwise by central differences. `inverse` is only needed to
/// re-parameterize a model.
struct CoordinateTransform {
  std::function<Vector(const Vector&)> forward;
  std::function<Matrix(const Vector&)> jacobian;
  std::function<Vector(const Vector&)> inverse;
  LabelList labels;
  double fd_step = 1e-6;

  Matrix jacobian_at(const Vector& x) const;
};

/// Polar re-parameterization of (v_x, v_y) into (g, beta), other states
/// unchanged. The state labels must contain v_x and v_y.
CoordinateTransform polar_velocity_transform(const LabelList& state_labels);

/// Linear transform z = M x.
CoordinateTransform linear_transform(const Matrix& M, const LabelList& labels);

struct TransformedObservability {
  ObservabilityMatrix O;
  double condition = 0.0;  // of dT/dx at x0
};

/// O_z = O_x (dT/dx)^-1 evaluated at x0.
TransformedObservability transform_O(const ObservabilityMatrix& O, const CoordinateTransform& T,
                                     const Vector& x0);

/// The model expressed in z coordinates: step_z = T o step o T^-1 and
/// measure_z = measure o T^-1. Angle-kind outputs of T are unwrapped to the
/// incoming z.
dynamics::SystemModel reparameterize(const dynamics::SystemModel& model,
                                     const CoordinateTransform& T);

/// Row/column extraction. Indices refer to sensors (0..p-1), window steps as
/// positions in O.steps, and states.
ObservabilityMatrix slice(const ObservabilityMatrix& O, const std::vector<Eigen::Index>& sensors,
                          const std::vector<Eigen::Index>& steps,
                          const std::vector<Eigen::Index>& states);
/// Slice by sensor and state names; empty name lists keep everything.
ObservabilityMatrix slice_by_name(const ObservabilityMatrix& O,
                                  const std::vector<std::string>& sensors,
                                  const std::vector<Eigen::Index>& steps,
                                  const std::vector<std::string>& states);
std::vector<Eigen::Index> all_indices(Eigen::Index count);

/// Per-step noise restricted to a sensor subset.
Matrix slice_noise(const Matrix& R_step, const std::vector<Eigen::Index>& sensors);

/// Minimum error variance for one window, start to finish.
MinErrorVariance window_variance(const ObservabilityMatrix& O, const Matrix& R_step,
                                 double lambda, std::vector<std::string>* warnings = nullptr);

}  // namespace bounds::observability
