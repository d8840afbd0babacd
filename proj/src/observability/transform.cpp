#include <cmath>
#include <memory>
#include <sstream>

#include "bounds/observability/observability.hpp"

namespace bounds::observability {

Matrix CoordinateTransform::jacobian_at(const Vector& x) const {
  if (jacobian) return jacobian(x);
  if (!forward) throw InputError("coordinate transform has no forward map");
  const Vector z0 = forward(x);
  Matrix J(z0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step * std::max(1.0, std::abs(x[i]));
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    Vector zp = forward(xp), zm = forward(xm);
    for (Eigen::Index j = 0; j < z0.size(); ++j) {
      if (j < static_cast<Eigen::Index>(labels.size()) &&
          labels[static_cast<std::size_t>(j)].kind == LabelKind::angle) {
        zp[j] = unwrap_to(z0[j], zp[j]);
        zm[j] = unwrap_to(z0[j], zm[j]);
      }
    }
    J.col(i) = (zp - zm) / (2.0 * h);
  }
  return J;
}

CoordinateTransform polar_velocity_transform(const LabelList& state_labels) {
  const auto ivx = static_cast<Eigen::Index>(require_label(state_labels, "v_x"));
  const auto ivy = static_cast<Eigen::Index>(require_label(state_labels, "v_y"));
  CoordinateTransform T;
  T.labels = state_labels;
  T.labels[static_cast<std::size_t>(ivx)] = {"g", "m/s", LabelKind::magnitude};
  T.labels[static_cast<std::size_t>(ivy)] = {"beta", "rad", LabelKind::angle};
  T.forward = [ivx, ivy](const Vector& x) {
    Vector z = x;
    z[ivx] = std::hypot(x[ivx], x[ivy]);
    z[ivy] = std::atan2(x[ivy], x[ivx]);
    return z;
  };
  T.inverse = [ivx, ivy](const Vector& z) {
    Vector x = z;
    x[ivx] = z[ivx] * std::cos(z[ivy]);
    x[ivy] = z[ivx] * std::sin(z[ivy]);
    return x;
  };
  T.jacobian = [ivx, ivy](const Vector& x) {
    Matrix J = Matrix::Identity(x.size(), x.size());
    const double vx = x[ivx], vy = x[ivy];
    const double g2 = vx * vx + vy * vy;
    J(ivx, ivx) = J(ivy, ivy) = 0.0;
    if (g2 > 0.0) {
      const double g = std::sqrt(g2);
      J(ivx, ivx) = vx / g;
      J(ivx, ivy) = vy / g;
      J(ivy, ivx) = -vy / g2;
      J(ivy, ivy) = vx / g2;
    }
    return J;
  };
  return T;
}

CoordinateTransform linear_transform(const Matrix& M, const LabelList& labels) {
  if (M.rows() != M.cols()) throw InputError("linear transform must be square");
  CoordinateTransform T;
  T.labels = labels;
  T.forward = [M](const Vector& x) -> Vector { return M * x; };
  T.jacobian = [M](const Vector&) -> Matrix { return M; };
  const Matrix Minv = M.fullPivLu().inverse();
  T.inverse = [Minv](const Vector& z) -> Vector { return Minv * z; };
  return T;
}

TransformedObservability transform_O(const ObservabilityMatrix& O, const CoordinateTransform& T,
                                     const Vector& x0) {
  const auto n = O.values.cols();
  const Matrix J = T.jacobian_at(x0);
  if (J.rows() != n || J.cols() != n) {
    throw InputError("transform Jacobian must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (static_cast<Eigen::Index>(T.labels.size()) != n) {
    throw InputError("transform must label all " + std::to_string(n) + " coordinates");
  }
  TransformedObservability out;
  if (!J.allFinite()) {
    out.condition = INFINITY;
  } else {
    Eigen::JacobiSVD<Matrix> svd(J);
    const Vector& s = svd.singularValues();
    out.condition = s[n - 1] > 0.0 ? s[0] / s[n - 1] : INFINITY;
  }
  if (!(out.condition < 1e12)) {
    std::ostringstream msg;
    msg << "coordinate transform Jacobian is singular at x0 (condition number " << out.condition
        << ")";
    throw NumericalError(msg.str());
  }
  out.O = O;
  out.O.values = J.transpose().partialPivLu().solve(O.values.transpose()).transpose();
  out.O.state_labels = T.labels;
  return out;
}

dynamics::SystemModel reparameterize(const dynamics::SystemModel& model,
                                     const CoordinateTransform& T) {
  if (!T.forward || !T.inverse) {
    throw InputError("re-parameterization needs forward and inverse maps");
  }
  if (T.labels.size() != model.state_dim()) {
    throw InputError("transform labels must match the model's state dimension");
  }
  auto base = std::make_shared<const dynamics::SystemModel>(model);
  auto transform = std::make_shared<const CoordinateTransform>(T);
  dynamics::SystemModel::Definition def = model.definition();
  def.name = model.name() + "-reparameterized";
  def.states = T.labels;
  def.step = [base, transform](const Vector& z, const Vector& u, double dt) {
    const Vector x_next = base->step_map()(transform->inverse(z), u, dt);
    Vector z_next = transform->forward(x_next);
    for (std::size_t i = 0; i < transform->labels.size(); ++i) {
      if (transform->labels[i].kind == LabelKind::angle) {
        const auto j = static_cast<Eigen::Index>(i);
        z_next[j] = unwrap_to(z[j], z_next[j]);
      }
    }
    return z_next;
  };
  def.measure = [base, transform](const Vector& z, const Vector& u) {
    return base->measure_map()(transform->inverse(z), u);
  };
  if (model.has_flight_quantities()) {
    def.flight_quantities = [base, transform](const Vector& z, const Vector& u) {
      return base->flight_quantities(transform->inverse(z), u);
    };
  }
  return dynamics::SystemModel(std::move(def));
}

}  // namespace bounds::observability
