#include "bounds/dynamics/system_model.hpp"

#include <cmath>
#include <sstream>

namespace bounds::dynamics {
namespace {

void require_finite(const Vector& v, const LabelList& labels, std::string_view what,
                    bool numerical) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream msg;
      msg << "non-finite " << what << " component '" << labels[static_cast<std::size_t>(i)].name
          << "' (" << v[i] << ")";
      if (numerical) throw NumericalError(msg.str());
      throw InputError(msg.str());
    }
  }
}

}  // namespace

SystemModel::SystemModel(Definition def) : def_(std::move(def)) {
  check_unique(def_.states, "state");
  check_unique(def_.inputs, "input");
  check_unique(def_.measurements, "measurement");
  if (!def_.step) throw InputError("model '" + def_.name + "' has no step map");
  if (!def_.measure) throw InputError("model '" + def_.name + "' has no measure map");
  if (def_.trim_input.size() == 0) {
    def_.trim_input = Vector::Zero(static_cast<Eigen::Index>(def_.inputs.size()));
  }
  if (static_cast<std::size_t>(def_.trim_input.size()) != def_.inputs.size()) {
    throw InputError("model '" + def_.name + "' trim input has wrong size");
  }
}

void SystemModel::check_sizes(const Vector& x, const Vector& u) const {
  if (static_cast<std::size_t>(x.size()) != state_dim()) {
    throw InputError("model '" + def_.name + "': state has " + std::to_string(x.size()) +
                     " components, expected " + std::to_string(state_dim()));
  }
  if (static_cast<std::size_t>(u.size()) != input_dim()) {
    throw InputError("model '" + def_.name + "': input has " + std::to_string(u.size()) +
                     " components, expected " + std::to_string(input_dim()));
  }
}

Vector SystemModel::step(const Vector& x, const Vector& u, double dt) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("step requires dt > 0");
  check_sizes(x, u);
  require_finite(x, def_.states, "state", false);
  require_finite(u, def_.inputs, "input", false);
  for (std::size_t i = 0; i < def_.states.size(); ++i) {
    if (def_.states[i].kind == LabelKind::magnitude && x[static_cast<Eigen::Index>(i)] < 0.0) {
      throw InputError("magnitude state '" + def_.states[i].name + "' is negative");
    }
  }
  Vector next = def_.step(x, u, dt);
  require_finite(next, def_.states, "propagated state", true);
  return next;
}

Vector SystemModel::measure(const Vector& x, const Vector& u) const {
  check_sizes(x, u);
  Vector y = def_.measure(x, u);
  if (static_cast<std::size_t>(y.size()) != measurement_dim()) {
    throw NumericalError("model '" + def_.name + "' measure map returned wrong size");
  }
  return y;
}

FlightQuantities SystemModel::flight_quantities(const Vector& x, const Vector& u) const {
  if (!def_.flight_quantities) {
    throw InputError("model '" + def_.name + "' does not expose flight quantities");
  }
  check_sizes(x, u);
  return def_.flight_quantities(x, u);
}

SystemModel SystemModel::with_measurements(LabelList labels, MeasureMap measure) const {
  Definition def = def_;
  def.measurements = std::move(labels);
  def.measure = std::move(measure);
  return SystemModel(std::move(def));
}

Matrix simulate(const SystemModel& model, const Vector& x0, const Matrix& inputs, double dt) {
  const auto steps = inputs.rows();
  Matrix states(steps + 1, static_cast<Eigen::Index>(model.state_dim()));
  states.row(0) = x0.transpose();
  Vector x = x0;
  for (Eigen::Index k = 0; k < steps; ++k) {
    x = model.step(x, inputs.row(k).transpose(), dt);
    states.row(k + 1) = x.transpose();
  }
  return states;
}

}  // namespace bounds::dynamics
