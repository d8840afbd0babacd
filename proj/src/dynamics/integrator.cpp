#include "bounds/dynamics/integrator.hpp"

namespace bounds::dynamics {

Vector rk4_step(const VectorField& field, const Vector& x, const Vector& u, double dt) {
  const Vector k1 = field(x, u);
  const Vector k2 = field(x + 0.5 * dt * k1, u);
  const Vector k3 = field(x + 0.5 * dt * k2, u);
  const Vector k4 = field(x + dt * k3, u);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SystemModel::StepMap rk4_stepper(VectorField field) {
  return [field = std::move(field)](const Vector& x, const Vector& u, double dt) {
    return rk4_step(field, x, u, dt);
  };
}

}  // namespace bounds::dynamics
