#include <sstream>

#include "bounds/observability/observability.hpp"

namespace bounds::observability {
namespace {

/// Measurements y_0..y_{omega-1} from x0. Angle outputs are unwrapped to
/// `reference` when given, otherwise along time.
Matrix measurement_run(const dynamics::SystemModel& model, const Vector& x0, const Matrix& inputs,
                       double dt, int omega, const Matrix* reference, const std::string& tag) {
  const auto p = static_cast<Eigen::Index>(model.measurement_dim());
  const auto& labels = model.measurement_labels();
  Matrix Y(omega, p);
  Vector x = x0;
  for (Eigen::Index k = 0; k < omega; ++k) {
    const Vector u = inputs.row(k).transpose();
    Vector y;
    try {
      y = model.measure(x, u);
      if (k + 1 < omega) x = model.step(x, u, dt);
    } catch (const NumericalError& e) {
      throw NumericalError(tag + ", step " + std::to_string(k) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(tag + ", step " + std::to_string(k) + ": " + e.what());
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      if (labels[static_cast<std::size_t>(j)].kind != LabelKind::angle) continue;
      if (reference != nullptr) {
        y[j] = unwrap_to((*reference)(k, j), y[j]);
      } else if (k > 0) {
        y[j] = unwrap_to(Y(k - 1, j), y[j]);
      }
    }
    Y.row(k) = y.transpose();
  }
  return Y;
}

Vector stack(const Matrix& Y) {
  // Row-major flattening: entry k * p + j.
  Vector out(Y.size());
  for (Eigen::Index k = 0; k < Y.rows(); ++k) out.segment(k * Y.cols(), Y.cols()) = Y.row(k);
  return out;
}

}  // namespace

ObservabilityMatrix empirical_O(const dynamics::SystemModel& model, const Vector& x0,
                                const Matrix& inputs, double dt, int omega,
                                const EmpiricalOptions& options) {
  if (omega < 1) throw InputError("observability window must be >= 1 step");
  if (!(options.epsilon > 0.0)) throw InputError("perturbation epsilon must be > 0");
  if (inputs.rows() < omega) {
    throw InputError("observability window of " + std::to_string(omega) + " steps needs " +
                     std::to_string(omega) + " input rows, got " + std::to_string(inputs.rows()));
  }
  if (static_cast<std::size_t>(x0.size()) != model.state_dim()) {
    throw InputError("initial state has wrong dimension");
  }
  const auto n = x0.size();
  const auto p = static_cast<Eigen::Index>(model.measurement_dim());
  const double eps = options.epsilon;
  const auto& states = model.state_labels();

  ObservabilityMatrix O;
  O.values.resize(omega * p, n);
  O.state_labels = states;
  O.measurement_labels = model.measurement_labels();
  O.steps = all_indices(omega);
  O.epsilon = eps;

  const Matrix nominal = measurement_run(model, x0, inputs, dt, omega, nullptr, "nominal run");
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& label = states[static_cast<std::size_t>(i)];
    Vector plus = x0, minus = x0;
    plus[i] += eps;
    minus[i] -= eps;
    const Matrix Yp = measurement_run(model, plus, inputs, dt, omega, &nominal,
                                      "state '" + label.name + "' perturbed by +eps");
    if (label.kind == LabelKind::magnitude && minus[i] < 0.0) {
      if (!options.allow_one_sided) {
        std::ostringstream msg;
        msg << "perturbing magnitude state '" << label.name << "' (" << x0[i] << ") by -" << eps
            << " makes it negative; use a smaller epsilon or allow a one-sided difference";
        throw InputError(msg.str());
      }
      O.values.col(i) = stack(Yp - nominal) / eps;
      O.warnings.push_back("one-sided difference used for magnitude state '" + label.name + "'");
      continue;
    }
    const Matrix Ym = measurement_run(model, minus, inputs, dt, omega, &nominal,
                                      "state '" + label.name + "' perturbed by -eps");
    O.values.col(i) = stack(Yp - Ym) / (2.0 * eps);
  }
  if (!O.values.allFinite()) throw NumericalError("observability matrix has non-finite entries");
  return O;
}

ObservabilityMatrix empirical_O(const dynamics::SystemModel& model,
                                const dynamics::MeasurementCatalogue& catalogue,
                                const Vector& x0, const Matrix& inputs, double dt, int omega,
                                const EmpiricalOptions& options) {
  return empirical_O(dynamics::bind_catalogue(model, catalogue), x0, inputs, dt, omega, options);
}

}  // namespace bounds::observability
