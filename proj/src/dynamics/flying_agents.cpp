#include "bounds/dynamics/flying_agents.hpp"

#include <cmath>

#include "bounds/dynamics/integrator.hpp"

namespace bounds::dynamics {

Airflow apparent_airflow(double vx, double vy, double wind_speed, double psi, double zeta) {
  return {vx - wind_speed * std::cos(psi - zeta), vy + wind_speed * std::sin(psi - zeta)};
}

Airflow apparent_airflow(const Vector& s) {
  if (s.size() != kinematic::kStateDim && s.size() != drone::kStateDim) {
    throw InputError("apparent_airflow expects a kinematic or dynamic agent state");
  }
  if (s.size() == kinematic::kStateDim) {
    using namespace kinematic;
    return apparent_airflow(s[vx], s[vy], s[w], s[psi], s[zeta]);
  }
  using namespace drone;
  return apparent_airflow(s[vx], s[vy], s[w], s[psi], s[zeta]);
}

// --- kinematic ---------------------------------------------------------------

namespace kinematic {

LabelList state_labels() {
  return {
      {"x", "m", LabelKind::linear},        {"y", "m", LabelKind::linear},
      {"z", "m", LabelKind::linear},        {"v_x", "m/s", LabelKind::linear},
      {"v_y", "m/s", LabelKind::linear},    {"v_z", "m/s", LabelKind::linear},
      {"phi", "rad", LabelKind::angle},     {"theta", "rad", LabelKind::angle},
      {"psi", "rad", LabelKind::angle},     {"w", "m/s", LabelKind::magnitude},
      {"zeta", "rad", LabelKind::angle},    {"k_z", "1", LabelKind::linear},
      {"k_phi", "1", LabelKind::linear},    {"k_theta", "1", LabelKind::linear},
      {"k_psi", "1", LabelKind::linear},
  };
}

LabelList input_labels() {
  return {
      {"u_z", "m/s^2", LabelKind::linear},    {"u_phi", "rad/s", LabelKind::linear},
      {"u_theta", "rad/s", LabelKind::linear}, {"u_psi", "rad/s", LabelKind::linear},
      {"u_w", "m/s^2", LabelKind::linear},    {"u_zeta", "rad/s", LabelKind::linear},
  };
}

Vector default_state() {
  Vector s = Vector::Zero(kStateDim);
  s[k_z] = s[k_phi] = s[k_theta] = s[k_psi] = 1.0;
  return s;
}

Vector derivative(const Params& p, const Vector& s, const Vector& u) {
  const double cpsi = std::cos(s[psi]), spsi = std::sin(s[psi]);
  const double cphi = std::cos(s[phi]), sphi = std::sin(s[phi]);
  const double cth = std::cos(s[theta]), sth = std::sin(s[theta]);
  const auto air = apparent_airflow(s[vx], s[vy], s[w], s[psi], s[zeta]);
  const double thrust = u[u_z] * s[k_z];
  const double yaw_rate = u[u_psi] * s[k_psi];

  Vector d = Vector::Zero(kStateDim);
  d[x] = s[vx] * cpsi - s[vy] * spsi;
  d[y] = s[vx] * spsi + s[vy] * cpsi;
  d[z] = s[vz];
  d[vx] = thrust * cphi * sth - p.drag * air.ax + s[vy] * yaw_rate;
  d[vy] = -thrust * sphi - p.drag * air.ay - s[vx] * yaw_rate;
  d[vz] = -thrust * cphi * cth - p.drag * s[vz] + p.gravity;
  d[phi] = u[u_phi] * s[k_phi];
  d[theta] = u[u_theta] * s[k_theta];
  d[psi] = yaw_rate;
  d[w] = u[u_w];
  d[zeta] = u[u_zeta];
  return d;
}

}  // namespace kinematic

SystemModel make_kinematic_agent(const kinematic::Params& params,
                                 const MeasurementCatalogue& catalogue) {
  using namespace kinematic;
  SystemModel::Definition def;
  def.name = "kinematic";
  def.states = state_labels();
  def.inputs = input_labels();
  def.step = rk4_stepper(
      [params](const Vector& s, const Vector& u) { return derivative(params, s, u); });
  def.measure = [](const Vector&, const Vector&) { return Vector(); };
  def.params = {{"C", params.drag}, {"gravity", params.gravity}};
  def.trim_input = Vector::Zero(kInputDim);
  def.trim_input[u_z] = params.gravity;
  def.flight_quantities = [params](const Vector& s, const Vector& u) {
    const Vector d = derivative(params, s, u);
    FlightQuantities fq;
    fq.vx = s[vx];
    fq.vy = s[vy];
    fq.psi = s[psi];
    fq.psi_dot = d[psi];
    fq.wind_speed = s[w];
    fq.wind_direction = s[zeta];
    fq.z = s[z];
    fq.vx_dot = d[vx];
    fq.vy_dot = d[vy];
    return fq;
  };
  return bind_catalogue(SystemModel(std::move(def)), catalogue);
}

// --- dynamic -----------------------------------------------------------------

namespace drone {

LabelList state_labels() {
  return {
      {"x", "m", LabelKind::linear},           {"y", "m", LabelKind::linear},
      {"z", "m", LabelKind::linear},           {"v_x", "m/s", LabelKind::linear},
      {"v_y", "m/s", LabelKind::linear},       {"v_z", "m/s", LabelKind::linear},
      {"phi", "rad", LabelKind::angle},        {"theta", "rad", LabelKind::angle},
      {"psi", "rad", LabelKind::angle},        {"omega_x", "rad/s", LabelKind::linear},
      {"omega_y", "rad/s", LabelKind::linear}, {"omega_z", "rad/s", LabelKind::linear},
      {"w", "m/s", LabelKind::magnitude},      {"zeta", "rad", LabelKind::angle},
      {"m", "kg", LabelKind::magnitude},       {"I_x", "kg m^2", LabelKind::magnitude},
      {"I_y", "kg m^2", LabelKind::magnitude}, {"I_z", "kg m^2", LabelKind::magnitude},
      {"C", "kg/s", LabelKind::magnitude},
  };
}

LabelList input_labels() {
  return {
      {"u_z", "N", LabelKind::linear},       {"u_phi", "N m", LabelKind::linear},
      {"u_theta", "N m", LabelKind::linear}, {"u_psi", "N m", LabelKind::linear},
      {"u_w", "m/s^2", LabelKind::linear},   {"u_zeta", "rad/s", LabelKind::linear},
  };
}

Vector default_state(const Params& p) {
  Vector s = Vector::Zero(kStateDim);
  s[m] = p.mass;
  s[I_x] = p.inertia_x;
  s[I_y] = p.inertia_y;
  s[I_z] = p.inertia_z;
  s[C] = p.drag;
  return s;
}

Eigen::Vector3d attitude_rates(const Vector& s) {
  const double cphi = std::cos(s[phi]), sphi = std::sin(s[phi]);
  const double cth = std::cos(s[theta]);
  if (std::abs(cth) < 1e-9) throw NumericalError("attitude kinematics singular at theta = +-pi/2");
  const double coupled = s[omega_y] * sphi + s[omega_z] * cphi;
  return {s[omega_x] + std::tan(s[theta]) * coupled, s[omega_y] * cphi - s[omega_z] * sphi,
          coupled / cth};
}

Vector derivative(const Params& p, const Vector& s, const Vector& u) {
  const double mass = s[m];
  if (!(mass > 0.0) || !(s[I_x] > 0.0) || !(s[I_y] > 0.0) || !(s[I_z] > 0.0)) {
    throw NumericalError("dynamic agent requires positive mass and inertias");
  }
  const double cpsi = std::cos(s[psi]), spsi = std::sin(s[psi]);
  const double cphi = std::cos(s[phi]), sphi = std::sin(s[phi]);
  const double cth = std::cos(s[theta]), sth = std::sin(s[theta]);
  const auto air = apparent_airflow(s[vx], s[vy], s[w], s[psi], s[zeta]);
  const Eigen::Vector3d rates = attitude_rates(s);

  Vector d = Vector::Zero(kStateDim);
  d[x] = s[vx] * cpsi - s[vy] * spsi;
  d[y] = s[vx] * spsi + s[vy] * cpsi;
  d[z] = s[vz];
  d[vx] = (u[u_z] * cphi * sth - s[C] * air.ax) / mass + s[vy] * rates[2];
  d[vy] = (-u[u_z] * sphi - s[C] * air.ay) / mass - s[vx] * rates[2];
  d[vz] = (-u[u_z] * cphi * cth - s[C] * s[vz] + mass * p.gravity) / mass;
  d[phi] = rates[0];
  d[theta] = rates[1];
  d[psi] = rates[2];
  d[omega_x] = u[u_phi] / s[I_x] + (s[I_y] - s[I_z]) / s[I_x] * s[omega_y] * s[omega_z];
  d[omega_y] = u[u_theta] / s[I_y] + (s[I_z] - s[I_x]) / s[I_y] * s[omega_x] * s[omega_z];
  d[omega_z] = u[u_psi] / s[I_z] + (s[I_x] - s[I_y]) / s[I_z] * s[omega_x] * s[omega_y];
  d[w] = u[u_w];
  d[zeta] = u[u_zeta];
  return d;
}

}  // namespace drone

SystemModel make_dynamic_agent(const drone::Params& params, const MeasurementCatalogue& catalogue) {
  using namespace drone;
  SystemModel::Definition def;
  def.name = "dynamic";
  def.states = state_labels();
  def.inputs = input_labels();
  def.step = rk4_stepper(
      [params](const Vector& s, const Vector& u) { return derivative(params, s, u); });
  def.measure = [](const Vector&, const Vector&) { return Vector(); };
  def.params = {{"m", params.mass},      {"I_x", params.inertia_x}, {"I_y", params.inertia_y},
                {"I_z", params.inertia_z}, {"C", params.drag},       {"gravity", params.gravity}};
  def.trim_input = Vector::Zero(kInputDim);
  def.trim_input[u_z] = params.mass * params.gravity;
  def.flight_quantities = [params](const Vector& s, const Vector& u) {
    const Vector d = derivative(params, s, u);
    FlightQuantities fq;
    fq.vx = s[vx];
    fq.vy = s[vy];
    fq.psi = s[psi];
    fq.psi_dot = d[psi];
    fq.wind_speed = s[w];
    fq.wind_direction = s[zeta];
    fq.z = s[z];
    fq.vx_dot = d[vx];
    fq.vy_dot = d[vy];
    return fq;
  };
  return bind_catalogue(SystemModel(std::move(def)), catalogue);
}

// --- planar ------------------------------------------------------------------

namespace planar {

LabelList state_labels() {
  return {{"z", "m", LabelKind::linear},
          {"v_z", "m/s", LabelKind::linear},
          {"v_x", "m/s", LabelKind::linear}};
}

LabelList input_labels() {
  return {{"u_z", "m/s^2", LabelKind::linear}, {"u_x", "m/s^2", LabelKind::linear}};
}

Vector derivative(const Vector& s, const Vector& u) {
  Vector d(kStateDim);
  d[z] = s[vz];
  d[vz] = u[u_z];
  d[vx] = u[u_x];
  return d;
}

}  // namespace planar

SystemModel make_planar_model(const MeasurementCatalogue& catalogue) {
  using namespace planar;
  SystemModel::Definition def;
  def.name = "planar";
  def.states = state_labels();
  def.inputs = input_labels();
  def.step = rk4_stepper([](const Vector& s, const Vector& u) { return derivative(s, u); });
  def.measure = [](const Vector&, const Vector&) { return Vector(); };
  def.flight_quantities = [](const Vector& s, const Vector& u) {
    FlightQuantities fq;
    fq.vx = s[vx];
    fq.z = s[z];
    fq.vx_dot = u[u_x];
    return fq;
  };
  return bind_catalogue(SystemModel(std::move(def)), catalogue);
}

}  // namespace bounds::dynamics
