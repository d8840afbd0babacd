#include <sstream>
#include <unordered_set>

#include "bounds/observability/observability.hpp"

namespace bounds::observability {

Matrix block_noise(const Matrix& R_step, Eigen::Index steps) {
  const auto p = R_step.rows();
  Matrix R = Matrix::Zero(p * steps, p * steps);
  for (Eigen::Index k = 0; k < steps; ++k) R.block(k * p, k * p, p, p) = R_step;
  return R;
}

Matrix default_noise(Eigen::Index sensors) {
  return kDefaultNoiseVariance * Matrix::Identity(sensors, sensors);
}

FisherInfo fisher(const ObservabilityMatrix& O, const Matrix& R_step) {
  if (R_step.rows() != O.sensor_count() || R_step.cols() != O.sensor_count()) {
    throw InputError("per-step noise is " + std::to_string(R_step.rows()) + "x" +
                     std::to_string(R_step.cols()) + " but the observability matrix has " +
                     std::to_string(O.sensor_count()) + " sensors");
  }
  return fisher(O.values, block_noise(R_step, O.step_count()));
}

FisherInfo fisher(const Matrix& O, const Matrix& R) {
  if (R.rows() != O.rows() || R.cols() != O.rows()) {
    throw InputError("noise covariance must be " + std::to_string(O.rows()) + "x" +
                     std::to_string(O.rows()));
  }
  if (!R.allFinite() || !R.isApprox(R.transpose(), 1e-12)) {
    throw InputError("noise covariance must be finite and symmetric");
  }
  Eigen::LLT<Matrix> llt(R);
  if (llt.info() != Eigen::Success) {
    throw InputError("noise covariance is singular or not positive definite");
  }
  const Matrix W = llt.matrixL().solve(O);
  FisherInfo out;
  out.F = W.transpose() * W;
  out.F = 0.5 * (out.F + out.F.transpose()).eval();
  out.R_block = R;
  return out;
}

ChernoffResult chernoff_inverse(const Matrix& F, double lambda) {
  if (!(lambda > 0.0)) throw InputError("Chernoff regularization lambda must be > 0");
  if (F.rows() != F.cols() || F.rows() == 0) throw InputError("Fisher matrix must be square");
  if (!F.allFinite()) throw NumericalError("Fisher matrix has non-finite entries");
  const auto n = F.rows();
  ChernoffResult out;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(F, Eigen::EigenvaluesOnly);
  out.eigenvalues = eig.eigenvalues();
  const double scale = out.eigenvalues.cwiseAbs().maxCoeff();
  std::optional<double> smallest_nonzero;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.eigenvalues[i] > 1e-12 * scale) {
      smallest_nonzero = out.eigenvalues[i];
      break;
    }
  }
  if (smallest_nonzero && lambda >= *smallest_nonzero) {
    std::ostringstream msg;
    msg << "lambda " << lambda << " is not below the smallest nonzero Fisher eigenvalue "
        << *smallest_nonzero << "; weakly observable directions are distorted";
    out.warnings.push_back(msg.str());
  }

  Matrix A = F;
  A.diagonal().array() += lambda;
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "Cholesky factorization of F + lambda I failed; eigenvalues of F:";
    for (Eigen::Index i = 0; i < n; ++i) msg << ' ' << out.eigenvalues[i];
    throw NumericalError(msg.str());
  }
  out.inverse = llt.solve(Matrix::Identity(n, n));
  out.inverse = 0.5 * (out.inverse + out.inverse.transpose()).eval();
  out.mev.lambda = lambda;
  out.mev.variance = out.inverse.diagonal();
  out.mev.saturated.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    out.mev.saturated[static_cast<std::size_t>(i)] = out.mev.variance[i] >= 0.5 / lambda;
  }
  return out;
}

Matrix pseudoinverse(const Matrix& F, double rcond) {
  Eigen::JacobiSVD<Matrix> svd(F, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? rcond * s[0] : 0.0;
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

std::vector<Eigen::Index> all_indices(Eigen::Index count) {
  std::vector<Eigen::Index> out(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

namespace {

void check_subset(const std::vector<Eigen::Index>& idx, Eigen::Index bound, std::string_view what) {
  if (idx.empty()) throw InputError("empty " + std::string(what) + " subset");
  std::unordered_set<Eigen::Index> seen;
  for (auto i : idx) {
    if (i < 0 || i >= bound) {
      throw InputError(std::string(what) + " index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(bound) + ")");
    }
    if (!seen.insert(i).second) {
      throw InputError("repeated " + std::string(what) + " index " + std::to_string(i));
    }
  }
}

}  // namespace

ObservabilityMatrix slice(const ObservabilityMatrix& O, const std::vector<Eigen::Index>& sensors,
                          const std::vector<Eigen::Index>& steps,
                          const std::vector<Eigen::Index>& states) {
  const auto p = O.sensor_count();
  check_subset(sensors, p, "sensor");
  check_subset(steps, O.step_count(), "window step");
  check_subset(states, O.values.cols(), "state");
  ObservabilityMatrix out;
  out.epsilon = O.epsilon;
  out.window_start = O.window_start;
  out.warnings = O.warnings;
  std::vector<Eigen::Index> rows;
  for (auto s : steps) {
    out.steps.push_back(O.steps[static_cast<std::size_t>(s)]);
    for (auto j : sensors) rows.push_back(s * p + j);
  }
  out.values = O.values(rows, states);
  for (auto j : sensors) out.measurement_labels.push_back(O.measurement_labels[static_cast<std::size_t>(j)]);
  for (auto i : states) out.state_labels.push_back(O.state_labels[static_cast<std::size_t>(i)]);
  return out;
}

ObservabilityMatrix slice_by_name(const ObservabilityMatrix& O,
                                  const std::vector<std::string>& sensors,
                                  const std::vector<Eigen::Index>& steps,
                                  const std::vector<std::string>& states) {
  std::vector<Eigen::Index> sensor_idx, state_idx;
  for (const auto& s : sensors) {
    sensor_idx.push_back(static_cast<Eigen::Index>(require_label(O.measurement_labels, s)));
  }
  for (const auto& s : states) {
    state_idx.push_back(static_cast<Eigen::Index>(require_label(O.state_labels, s)));
  }
  if (sensors.empty()) sensor_idx = all_indices(O.sensor_count());
  if (states.empty()) state_idx = all_indices(O.values.cols());
  return slice(O, sensor_idx, steps.empty() ? all_indices(O.step_count()) : steps, state_idx);
}

Matrix slice_noise(const Matrix& R_step, const std::vector<Eigen::Index>& sensors) {
  check_subset(sensors, R_step.rows(), "sensor");
  return R_step(sensors, sensors);
}

MinErrorVariance window_variance(const ObservabilityMatrix& O, const Matrix& R_step,
                                 double lambda, std::vector<std::string>* warnings) {
  const auto info = fisher(O, R_step);
  auto result = chernoff_inverse(info.F, lambda);
  if (warnings) {
    warnings->insert(warnings->end(), O.warnings.begin(), O.warnings.end());
    warnings->insert(warnings->end(), result.warnings.begin(), result.warnings.end());
  }
  return std::move(result.mev);
}

}  // namespace bounds::observability
