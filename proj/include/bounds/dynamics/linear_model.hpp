#pragma once

#include "bounds/dynamics/system_model.hpp"

namespace bounds::dynamics {

/// Discrete LTI system x_{k+1} = A x_k + B u_k, y_k = C x_k + D u_k. The step
/// ignores dt. Labels are x0.., u0.., y0... B and D may be empty (no inputs).
SystemModel make_discrete_linear_model(const Matrix& A, const Matrix& B, const Matrix& C,
                                       const Matrix& D = Matrix());

}  // namespace bounds::dynamics
