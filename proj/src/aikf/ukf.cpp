#include "bounds/aikf/ukf.hpp"

#include <cmath>
#include <sstream>

namespace bounds::aikf {

namespace {

std::vector<bool> angle_mask(const LabelList& labels, Eigen::Index size) {
  std::vector<bool> mask(static_cast<std::size_t>(size), false);
  if (static_cast<Eigen::Index>(labels.size()) != size) return mask;
  for (std::size_t i = 0; i < labels.size(); ++i) mask[i] = labels[i].kind == LabelKind::angle;
  return mask;
}

Vector difference(const Vector& a, const Vector& b, const std::vector<bool>& angles) {
  Vector d = a - b;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (angles[static_cast<std::size_t>(i)]) d[i] = wrap_angle(d[i]);
  }
  return d;
}

void wrap_components(Vector& v, const std::vector<bool>& angles) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (angles[static_cast<std::size_t>(i)]) v[i] = wrap_angle(v[i]);
  }
}

std::string describe_point(const Vector& x, const LabelList& labels) {
  std::ostringstream out;
  out.precision(6);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out << ", ";
    if (i < static_cast<Eigen::Index>(labels.size())) {
      out << labels[static_cast<std::size_t>(i)].name << '=';
    }
    out << x[i];
  }
  return out.str();
}

std::string conditioning_report(const Matrix& S) {
  const Vector d = S.diagonal().cwiseAbs();
  std::ostringstream out;
  out << "factor diagonal range [" << d.minCoeff() << ", " << d.maxCoeff() << "]";
  if (d.minCoeff() > 0.0) {
    const double ratio = d.maxCoeff() / d.minCoeff();
    out << ", covariance condition estimate " << ratio * ratio;
  }
  return out.str();
}

// Applies `map` to every sigma point (columns of `points`), naming the
// sigma point when the map is undefined there.
Matrix transform_points(const Matrix& points, const LabelList& state_labels, const char* stage,
                        const std::function<Vector(const Vector&)>& map) {
  Matrix out;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    Vector yi;
    try {
      yi = map(points.col(i));
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << stage << ": sigma point " << i << " of " << points.cols() << " ("
          << describe_point(points.col(i), state_labels) << ") is invalid: " << e.what();
      throw NumericalError(msg.str());
    }
    if (i == 0) out.resize(yi.size(), points.cols());
    if (!all_finite(yi)) {
      std::ostringstream msg;
      msg << stage << ": non-finite result at sigma point " << i << " ("
          << describe_point(points.col(i), state_labels) << ")";
      throw NumericalError(msg.str());
    }
    out.col(i) = yi;
  }
  return out;
}

struct Moments {
  Vector mean;
  Matrix deviations;  // columns: point - mean
  Matrix sqrt_cov;
};

// Weighted mean and square-root covariance of transformed points with an
// additive noise factor. The mean is accumulated relative to the central
// point so the large negative central weight does not cancel digits.
Moments unscented_moments(const Matrix& points, const UnscentedWeights& w,
                          const std::vector<bool>& angles, const Matrix& noise_sqrt,
                          const char* stage) {
  const Eigen::Index m = points.rows();
  const Eigen::Index count = points.cols();
  Vector offset = Vector::Zero(m);
  for (Eigen::Index i = 1; i < count; ++i) {
    offset += w.rest * difference(points.col(i), points.col(0), angles);
  }
  Moments out;
  out.mean = points.col(0) + offset;
  wrap_components(out.mean, angles);
  out.deviations.resize(m, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    out.deviations.col(i) = difference(points.col(i), out.mean, angles);
  }

  Matrix stacked(count - 1 + noise_sqrt.cols(), m);
  stacked.topRows(count - 1) = std::sqrt(w.rest) * out.deviations.rightCols(count - 1).transpose();
  stacked.bottomRows(noise_sqrt.cols()) = noise_sqrt.transpose();
  Eigen::HouseholderQR<Matrix> qr(stacked);
  Matrix upper = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  Matrix S = upper.transpose();
  for (Eigen::Index j = 0; j < m; ++j) {
    if (S(j, j) < 0.0) S.col(j) = -S.col(j);
  }
  try {
    cholupdate(S, std::sqrt(std::abs(w.cov0)) * out.deviations.col(0), w.cov0 >= 0.0 ? 1.0 : -1.0);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(stage) + ": " + e.what());
  }
  out.sqrt_cov = S;
  return out;
}

void check_factor(const Matrix& S, const char* stage) {
  const Vector d = S.diagonal();
  if (!S.allFinite() || (d.array() <= 0.0).any()) {
    throw NumericalError(std::string(stage) + ": covariance factor breakdown; " +
                         conditioning_report(S));
  }
}

Matrix lower_factor(const Matrix& A, const char* what) {
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success || !A.allFinite()) {
    throw InputError(std::string(what) + " is not symmetric positive definite");
  }
  return llt.matrixL();
}

}  // namespace

void UnscentedParams::validate(Eigen::Index n) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("unscented alpha must be positive");
  if (!std::isfinite(beta)) throw InputError("unscented beta must be finite");
  if (!std::isfinite(kappa)) throw InputError("unscented kappa must be finite");
  const double lambda = alpha * alpha * (static_cast<double>(n) + kappa) - static_cast<double>(n);
  if (!(static_cast<double>(n) + lambda > 0.0)) {
    throw InputError("unscented parameters give a non-positive spread n + lambda");
  }
}

UnscentedWeights UnscentedWeights::make(Eigen::Index n, const UnscentedParams& p) {
  p.validate(n);
  const double nd = static_cast<double>(n);
  UnscentedWeights w;
  w.lambda = p.alpha * p.alpha * (nd + p.kappa) - nd;
  w.mean0 = w.lambda / (nd + w.lambda);
  w.cov0 = w.mean0 + (1.0 - p.alpha * p.alpha + p.beta);
  w.rest = 1.0 / (2.0 * (nd + w.lambda));
  return w;
}

double UnscentedWeights::spread(Eigen::Index n) const {
  return std::sqrt(static_cast<double>(n) + lambda);
}

FilterState FilterState::make(Vector mean, const Matrix& P, Matrix Q, Matrix R,
                              UnscentedParams unscented) {
  const Eigen::Index n = mean.size();
  if (n == 0) throw InputError("filter state must have at least one component");
  if (!all_finite(mean)) throw InputError("filter mean must be finite");
  if (P.rows() != n || P.cols() != n) throw InputError("covariance shape does not match the mean");
  if (Q.rows() != n || Q.cols() != n) throw InputError("process noise Q shape does not match the mean");
  if (R.rows() == 0 || R.rows() != R.cols()) throw InputError("measurement noise R must be square");
  unscented.validate(n);
  FilterState fs;
  fs.sqrt_cov = lower_factor(0.5 * (P + P.transpose()), "initial covariance P");
  lower_factor(0.5 * (R + R.transpose()), "measurement noise R");
  psd_sqrt(Q);
  fs.mean = std::move(mean);
  fs.Q = std::move(Q);
  fs.R = std::move(R);
  fs.unscented = unscented;
  return fs;
}

Matrix sigma_points(const Vector& mean, const Matrix& sqrt_cov, const UnscentedParams& params) {
  const Eigen::Index n = mean.size();
  const double c = UnscentedWeights::make(n, params).spread(n);
  Matrix pts(n, 2 * n + 1);
  pts.col(0) = mean;
  for (Eigen::Index i = 0; i < n; ++i) {
    pts.col(1 + i) = mean + c * sqrt_cov.col(i);
    pts.col(1 + n + i) = mean - c * sqrt_cov.col(i);
  }
  return pts;
}

void cholupdate(Matrix& L, Vector v, double sign) {
  const Eigen::Index n = L.rows();
  const double s = sign >= 0.0 ? 1.0 : -1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lkk = L(k, k);
    const double r2 = lkk * lkk + s * v[k] * v[k];
    if (!(r2 > 0.0) || !std::isfinite(r2)) {
      std::ostringstream msg;
      msg << "Cholesky " << (s > 0 ? "update" : "downdate") << " lost positive definiteness at row "
          << k << "; " << conditioning_report(L);
      throw NumericalError(msg.str());
    }
    const double r = std::sqrt(r2);
    const double c = r / lkk;
    const double sn = v[k] / lkk;
    L(k, k) = r;
    if (k + 1 < n) {
      const Eigen::Index m = n - k - 1;
      L.col(k).tail(m) = (L.col(k).tail(m) + s * sn * v.tail(m)) / c;
      v.tail(m) = c * v.tail(m) - sn * L.col(k).tail(m);
    }
  }
}

Matrix psd_sqrt(const Matrix& A) {
  if (A.rows() != A.cols()) throw InputError("matrix square root needs a square matrix");
  if (!A.allFinite()) throw InputError("matrix square root of a non-finite matrix");
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const double tol = 1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -tol) throw InputError("process noise Q is not positive semidefinite");
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // Any factor with A = F F^T works for the stacked QR; a symmetric one is
  // fine and avoids a pivoted decomposition for singular Q.
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

FilterState ukf_predict(const FilterState& fs, const dynamics::SystemModel& model, const Vector& u,
                        double dt) {
  const Eigen::Index n = fs.dim();
  if (static_cast<Eigen::Index>(model.state_dim()) != n) {
    throw InputError("filter state dimension does not match the model");
  }
  const auto w = UnscentedWeights::make(n, fs.unscented);
  const auto angles = angle_mask(model.state_labels(), n);
  const Matrix pts = sigma_points(fs.mean, fs.sqrt_cov, fs.unscented);
  const Matrix next = transform_points(pts, model.state_labels(), "predict",
                                       [&](const Vector& x) { return model.step(x, u, dt); });
  const Moments mo = unscented_moments(next, w, angles, psd_sqrt(fs.Q), "predict");
  FilterState out = fs;
  if (out.state_labels.empty()) out.state_labels = model.state_labels();
  out.mean = mo.mean;
  out.sqrt_cov = mo.sqrt_cov;
  check_factor(out.sqrt_cov, "predict");
  return out;
}

FilterState ukf_update(const FilterState& fs, const MeasurementMap& map, const Vector& u,
                       const Vector& y, const Matrix* R) {
  const Eigen::Index n = fs.dim();
  const Matrix& noise = R ? *R : fs.R;
  if (noise.rows() != y.size() || noise.cols() != y.size()) {
    throw InputError("measurement has " + std::to_string(y.size()) +
                     " components but R is " + std::to_string(noise.rows()) + "x" +
                     std::to_string(noise.cols()));
  }
  if (!all_finite(y)) throw InputError("measurement contains non-finite values");
  const auto w = UnscentedWeights::make(n, fs.unscented);
  const auto y_angles = angle_mask(map.labels, y.size());
  const auto x_angles = angle_mask(fs.state_labels, n);

  const Matrix pts = sigma_points(fs.mean, fs.sqrt_cov, fs.unscented);
  const Matrix ys = transform_points(pts, fs.state_labels, "update", [&](const Vector& x) { return map.h(x, u); });
  if (ys.rows() != y.size()) throw InputError("measurement map output size does not match y");
  const Matrix noise_sqrt = lower_factor(0.5 * (noise + noise.transpose()), "measurement noise R");
  const Moments my = unscented_moments(ys, w, y_angles, noise_sqrt, "update");
  check_factor(my.sqrt_cov, "innovation");

  // Cross covariance; the central point sits at the mean, so only the
  // symmetric pairs contribute.
  Matrix Pxy = Matrix::Zero(n, y.size());
  for (Eigen::Index i = 1; i < pts.cols(); ++i) {
    Pxy += w.rest * difference(pts.col(i), fs.mean, x_angles) * my.deviations.col(i).transpose();
  }
  // K = Pxy (Sy Sy^T)^-1 via two triangular solves.
  const auto Sy = my.sqrt_cov.triangularView<Eigen::Lower>();
  Matrix Kt = Sy.solve(Pxy.transpose());
  Kt = Sy.transpose().solve(Kt);
  const Matrix K = Kt.transpose();

  const Vector innovation = difference(y, my.mean, y_angles);
  FilterState out = fs;
  out.mean = fs.mean + K * innovation;
  wrap_components(out.mean, x_angles);
  const Matrix U = K * my.sqrt_cov;
  for (Eigen::Index j = 0; j < U.cols(); ++j) {
    try {
      cholupdate(out.sqrt_cov, U.col(j), -1.0);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("update: ") + e.what());
    }
  }
  check_factor(out.sqrt_cov, "update");
  return out;
}

MeasurementMap model_measurement_map(const dynamics::SystemModel& model) {
  return {[&model](const Vector& x, const Vector& u) { return model.measure(x, u); },
          model.measurement_labels()};
}

FilterState ukf_step(const FilterState& fs, const dynamics::SystemModel& model, const Vector& u,
                     const Vector& y, double dt) {
  const FilterState predicted = ukf_predict(fs, model, u, dt);
  return ukf_update(predicted, model_measurement_map(model), u, y);
}

}  // namespace bounds::aikf
