#pragma once

#include "bounds/core.hpp"
#include "bounds/dynamics/measurements.hpp"
#include "bounds/dynamics/system_model.hpp"

namespace bounds::dynamics {

// ---------------------------------------------------------------------------
// 3D kinematic flying agent
//
// Body-level velocities rotate with heading; inputs are a body-z acceleration
// and attitude rates, plus wind speed/direction rates. Drag acts on the
// apparent airflow through a kinematic coefficient. The four calibration
// coefficients scale the inputs and default to one.
// ---------------------------------------------------------------------------
namespace kinematic {

enum State : Eigen::Index { x, y, z, vx, vy, vz, phi, theta, psi, w, zeta, k_z, k_phi, k_theta, k_psi };
enum Input : Eigen::Index { u_z, u_phi, u_theta, u_psi, u_w, u_zeta };
inline constexpr Eigen::Index kStateDim = 15;
inline constexpr Eigen::Index kInputDim = 6;

struct Params {
  double drag = 0.1;  // 1/s, kinematic drag on apparent airflow
  double gravity = 9.81;
};

LabelList state_labels();
LabelList input_labels();

/// Default state: at rest, zero wind, unit calibration coefficients.
Vector default_state();
/// State time-derivative.
Vector derivative(const Params& params, const Vector& x, const Vector& u);

}  // namespace kinematic

/// Apparent airflow in the body-level frame.
struct Airflow {
  double ax;
  double ay;
};

Airflow apparent_airflow(double vx, double vy, double wind_speed, double psi, double zeta);
/// Airflow for a kinematic (or dynamic) agent state vector.
Airflow apparent_airflow(const Vector& kinematic_state);

SystemModel make_kinematic_agent(const kinematic::Params& params,
                                 const MeasurementCatalogue& catalogue);

// ---------------------------------------------------------------------------
// 3D dynamical quadcopter with force/torque inputs. Mass, inertias, and drag
// are carried as auxiliary (constant) states.
// ---------------------------------------------------------------------------
namespace drone {

enum State : Eigen::Index {
  x, y, z, vx, vy, vz, phi, theta, psi, omega_x, omega_y, omega_z, w, zeta, m, I_x, I_y, I_z, C
};
enum Input : Eigen::Index { u_z, u_phi, u_theta, u_psi, u_w, u_zeta };
inline constexpr Eigen::Index kStateDim = 19;
inline constexpr Eigen::Index kInputDim = 6;

struct Params {
  double mass = 2.529;      // kg
  double inertia_x = 0.040; // kg m^2
  double inertia_y = 0.040;
  double inertia_z = 0.046;
  double drag = 0.1;        // kg/s
  double gravity = 9.81;
};

LabelList state_labels();
LabelList input_labels();
Vector default_state(const Params& params = {});
Vector derivative(const Params& params, const Vector& x, const Vector& u);
/// Euler-angle rates (phi_dot, theta_dot, psi_dot) from body rates.
Eigen::Vector3d attitude_rates(const Vector& x);

}  // namespace drone

SystemModel make_dynamic_agent(const drone::Params& params, const MeasurementCatalogue& catalogue);

// ---------------------------------------------------------------------------
// Planar altitude model: z, v_z, v_x driven by measured accelerations.
// ---------------------------------------------------------------------------
namespace planar {

enum State : Eigen::Index { z, vz, vx };
enum Input : Eigen::Index { u_z, u_x };
inline constexpr Eigen::Index kStateDim = 3;
inline constexpr Eigen::Index kInputDim = 2;

LabelList state_labels();
LabelList input_labels();
Vector derivative(const Vector& x, const Vector& u);

}  // namespace planar

SystemModel make_planar_model(const MeasurementCatalogue& catalogue);

}  // namespace bounds::dynamics
