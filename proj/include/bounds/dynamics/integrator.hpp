#pragma once

#include <functional>

#include "bounds/core.hpp"
#include "bounds/dynamics/system_model.hpp"

namespace bounds::dynamics {

/// Continuous-time vector field x_dot = f(x, u).
using VectorField = std::function<Vector(const Vector& x, const Vector& u)>;

/// Classical fourth-order Runge-Kutta step with u held constant over dt.
Vector rk4_step(const VectorField& field, const Vector& x, const Vector& u, double dt);

/// Wraps a vector field as a zero-order-hold RK4 step map.
SystemModel::StepMap rk4_stepper(VectorField field);

}  // namespace bounds::dynamics
