#include "bounds/dynamics/linear_model.hpp"

namespace bounds::dynamics {
namespace {

LabelList indexed_labels(const char* prefix, Eigen::Index count) {
  LabelList out;
  for (Eigen::Index i = 0; i < count; ++i) {
    out.push_back({prefix + std::to_string(i), "1", LabelKind::linear});
  }
  return out;
}

}  // namespace

SystemModel make_discrete_linear_model(const Matrix& A, const Matrix& B, const Matrix& C,
                                       const Matrix& D) {
  const Eigen::Index n = A.rows();
  if (n == 0 || A.cols() != n) throw InputError("linear model: A must be square and nonempty");
  if (C.cols() != n || C.rows() == 0) throw InputError("linear model: C must have n columns");
  const Eigen::Index m = B.size() == 0 ? 0 : B.cols();
  if (m > 0 && B.rows() != n) throw InputError("linear model: B must have n rows");
  if (D.size() != 0 && (D.rows() != C.rows() || D.cols() != m)) {
    throw InputError("linear model: D must be p x m");
  }
  const Matrix Bm = m > 0 ? B : Matrix::Zero(n, 0);
  const Matrix Dm = D.size() != 0 ? D : Matrix::Zero(C.rows(), m);

  SystemModel::Definition def;
  def.name = "linear";
  def.states = indexed_labels("x", n);
  def.inputs = indexed_labels("u", m);
  def.measurements = indexed_labels("y", C.rows());
  def.step = [A, Bm](const Vector& x, const Vector& u, double) -> Vector {
    return A * x + Bm * u;
  };
  def.measure = [C, Dm](const Vector& x, const Vector& u) -> Vector { return C * x + Dm * u; };
  return SystemModel(std::move(def));
}

}  // namespace bounds::dynamics
