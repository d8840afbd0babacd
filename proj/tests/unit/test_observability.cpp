#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bounds/dynamics/flying_agents.hpp"
#include "bounds/dynamics/linear_model.hpp"
#include "bounds/observability/observability.hpp"
#include "bounds/observability/sliding_window.hpp"

using namespace bounds;
using namespace bounds::observability;
namespace kin = bounds::dynamics::kinematic;
namespace pl = bounds::dynamics::planar;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> N(0.0, 1.0);
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) M(i, j) = N(rng);
  return M;
}

Matrix random_stable(std::mt19937_64& rng, Eigen::Index n) {
  Matrix A = random_matrix(rng, n, n);
  const double radius = Eigen::EigenSolver<Matrix>(A).eigenvalues().cwiseAbs().maxCoeff();
  return A * (0.9 / radius);
}

Vector kinematic_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vector x = kin::default_state();
  x[kin::z] = 2.0 + 0.5 * U(rng);
  x[kin::vx] = 1.0 + 0.3 * U(rng);
  x[kin::vy] = 0.3 * U(rng);
  x[kin::psi] = U(rng);
  x[kin::w] = 1.0 + 0.3 * U(rng);
  x[kin::zeta] = 2.0 * U(rng);
  return x;
}

Matrix kinematic_inputs(std::mt19937_64& rng, Eigen::Index rows) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Matrix u = Matrix::Zero(rows, kin::kInputDim);
  for (Eigen::Index k = 0; k < rows; ++k) {
    u(k, kin::u_z) = 9.81 + 0.2 * U(rng);
    u(k, kin::u_phi) = 0.1 * U(rng);
    u(k, kin::u_theta) = 0.1 * U(rng);
    u(k, kin::u_psi) = 0.5 * U(rng);
  }
  return u;
}

dynamics::MeasurementCatalogue cat(const char* text) {
  return dynamics::MeasurementCatalogue::parse(text);
}

}  // namespace

TEST(EmpiricalO, ScalarLinearSystem) {
  Matrix A(1, 1), C(1, 1);
  A << 0.9;
  C << 1.0;
  const auto model = dynamics::make_discrete_linear_model(A, Matrix(), C);
  const auto O = empirical_O(model, Vector::Constant(1, 2.0), Matrix::Zero(3, 0), 0.1, 3);
  ASSERT_EQ(O.values.rows(), 3);
  EXPECT_NEAR(O.values(0, 0), 1.0, 1e-9);
  EXPECT_NEAR(O.values(1, 0), 0.9, 1e-9);
  EXPECT_NEAR(O.values(2, 0), 0.81, 1e-9);
}

TEST(EmpiricalO, IdentityMeasurementOneStep) {
  std::string all;
  for (const auto& l : kin::state_labels()) all += (all.empty() ? "" : ",") + l.name;
  const auto model = dynamics::make_kinematic_agent({}, cat(all.c_str()));
  std::mt19937_64 rng(1);
  const auto O = empirical_O(model, kinematic_state(rng), kinematic_inputs(rng, 1), 0.1, 1);
  EXPECT_LE((O.values - Matrix::Identity(15, 15)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(EmpiricalO, PlanarForwardOpticFlowRow) {
  const auto model = dynamics::make_planar_model(cat("r_x"));
  Vector x(3);
  x << 4.0, 0.0, 1.5;
  const auto O = empirical_O(model, x, Matrix::Zero(1, 2), 0.1, 1);
  EXPECT_NEAR(O.values(0, pl::z), -1.5 / 16.0, 1e-6 * 1.5 / 16.0);
  EXPECT_NEAR(O.values(0, pl::vz), 0.0, 1e-12);
  EXPECT_NEAR(O.values(0, pl::vx), 0.25, 1e-6 * 0.25);
}

TEST(EmpiricalO, LtiEquivalence) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 1 + trial % 5, p = 1 + trial % 3;
    const int omega = 2 + trial % 5;
    const Matrix A = random_stable(rng, n), C = random_matrix(rng, p, n);
    const auto model = dynamics::make_discrete_linear_model(A, Matrix(), C);
    const auto O = empirical_O(model, random_matrix(rng, n, 1), Matrix::Zero(omega, 0), 1.0, omega);
    Matrix expected(p * omega, n);
    Matrix Ak = Matrix::Identity(n, n);
    for (int k = 0; k < omega; ++k) {
      expected.middleRows(k * p, p) = C * Ak;
      Ak = A * Ak;
    }
    EXPECT_LE((O.values - expected).norm() / expected.norm(), 1e-6);
  }
}

TEST(EmpiricalO, AngleMeasurementsUnwrappedBeforeDifferencing) {
  const auto model = dynamics::make_kinematic_agent({}, cat("beta"));
  Vector x = kin::default_state();
  x[kin::vx] = -1.0;
  x[kin::vy] = 1e-7;
  x[kin::w] = 0.5;
  std::mt19937_64 rng(2);
  const auto O = empirical_O(model, x, kinematic_inputs(rng, 3), 0.1, 3);
  EXPECT_LT(O.values.cwiseAbs().maxCoeff(), 10.0);
}

TEST(EmpiricalO, MagnitudePositivityAndOneSidedFallback) {
  const auto model = dynamics::make_kinematic_agent({}, cat("psi,a"));
  Vector x = kin::default_state();
  x[kin::vx] = 1.0;
  x[kin::w] = 0.0;
  std::mt19937_64 rng(3);
  const Matrix u = kinematic_inputs(rng, 3);
  try {
    empirical_O(model, x, u, 0.1, 3);
    FAIL();
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("'w'"), std::string::npos);
    EXPECT_NE(msg.find("one-sided"), std::string::npos);
  }
  EmpiricalOptions opts;
  opts.allow_one_sided = true;
  const auto O = empirical_O(model, x, u, 0.1, 3, opts);
  ASSERT_EQ(O.warnings.size(), 1u);
  EXPECT_TRUE(O.values.allFinite());
}

TEST(EmpiricalO, UndefinedMeasurementNamesStateSignAndStep) {
  const auto model = dynamics::make_planar_model(cat("r_x"));
  Vector x(3);
  x << 2e-5, -1.0, 1.0;  // z crosses zero during the run
  try {
    empirical_O(model, x, Matrix::Zero(3, 2), 1e-5, 3);
    FAIL();
  } catch (const NumericalError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("step"), std::string::npos) << msg;
    EXPECT_NE(msg.find("r_x"), std::string::npos) << msg;
  }
}

TEST(Fisher, IdentityAndScaling) {
  std::mt19937_64 rng(5);
  ObservabilityMatrix O;
  O.values = random_matrix(rng, 6, 3);
  O.measurement_labels = {{"a", "", LabelKind::linear}, {"b", "", LabelKind::linear},
                          {"c", "", LabelKind::linear}};
  O.steps = {0, 1};
  const auto F1 = fisher(O, Matrix::Identity(3, 3)).F;
  EXPECT_LE((F1 - O.values.transpose() * O.values).norm(), 1e-12 * F1.norm());
  const auto F10 = fisher(O, 10.0 * Matrix::Identity(3, 3)).F;
  EXPECT_LE((F10 - F1 / 10.0).norm(), 1e-12 * F1.norm());
  EXPECT_EQ(F1, F1.transpose());
}

TEST(Fisher, BlockwiseSummationOracle) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(0.05, 2.0);
  const Matrix O = random_matrix(rng, 6, 3);
  Vector r(6);
  for (int i = 0; i < 6; ++i) r[i] = U(rng);
  const Matrix F = fisher(O, Matrix(r.asDiagonal())).F;
  Matrix oracle = Matrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) {
    const Matrix H = O.middleRows(2 * k, 2);
    const Matrix Rk = r.segment(2 * k, 2).asDiagonal();
    oracle += H.transpose() * Rk.inverse() * H;
  }
  EXPECT_LE((F - oracle).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Fisher, SingularNoiseRejected) {
  const Matrix O = Matrix::Ones(2, 2);
  Matrix R = Matrix::Identity(2, 2);
  R(1, 1) = 0.0;
  EXPECT_THROW(fisher(O, R), InputError);
}

TEST(Chernoff, Examples) {
  auto r = chernoff_inverse(Matrix::Zero(1, 1), 1e-6);
  EXPECT_NEAR(r.mev.variance[0], 1e6, 1e-6 * 1e6);
  EXPECT_TRUE(r.mev.saturated[0]);

  Matrix F = Matrix::Zero(2, 2);
  F(0, 0) = 2.0;
  r = chernoff_inverse(F, 1e-6);
  EXPECT_NEAR(r.mev.variance[0], 0.5, 1e-6 * 0.5);
  EXPECT_NEAR(r.mev.variance[1], 1e6, 1e-6 * 1e6);
  EXPECT_FALSE(r.mev.saturated[0]);
  EXPECT_TRUE(r.mev.saturated[1]);
  const Matrix pinv = pseudoinverse(F);
  EXPECT_NEAR(pinv(0, 0), 0.5, 1e-12);
  EXPECT_EQ(pinv(1, 1), 0.0);
}

TEST(Chernoff, SmallLambdaLimitOnRankDeficientF) {
  std::mt19937_64 rng(8);
  const Matrix B = random_matrix(rng, 4, 2);
  const Matrix F = B * B.transpose();
  const auto r6 = chernoff_inverse(F, 1e-6);
  const auto r10 = chernoff_inverse(F, 1e-10);
  // Null-space component of each coordinate drives its variance to ~ |P_null e_i|^2 / lambda.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(F);
  const Matrix N = eig.eigenvectors().leftCols(2);
  const Matrix Vr = eig.eigenvectors().rightCols(2);
  const Vector er = eig.eigenvalues().tail(2);
  for (int i = 0; i < 4; ++i) {
    const double null_weight = N.row(i).squaredNorm();
    const double range_part = (Vr.row(i).array().square() / er.transpose().array()).sum();
    EXPECT_NEAR(r6.mev.variance[i], null_weight / 1e-6 + range_part,
                1e-3 * (null_weight / 1e-6 + range_part));
    EXPECT_NEAR(r10.mev.variance[i] * 1e-10, null_weight, 1e-6);
  }
}

TEST(Chernoff, ObservableSubspaceMatchesLimit) {
  // Observable coordinates with no null-space overlap match the lambda -> 0 limit.
  Matrix F = Matrix::Zero(4, 4);
  Matrix B(2, 2);
  B << 3.0, 1.0, 1.0, 2.0;
  F.topLeftCorner(2, 2) = B;
  const auto r6 = chernoff_inverse(F, 1e-6);
  const auto r10 = chernoff_inverse(F, 1e-10);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(r6.mev.variance[i], r10.mev.variance[i], 1e-3 * r10.mev.variance[i]);
  }
  for (int i = 2; i < 4; ++i) EXPECT_NEAR(r6.mev.variance[i], 1e6, 1.0);
  EXPECT_FALSE(chernoff_inverse(F, 1e-6).warnings.size());
  EXPECT_EQ(chernoff_inverse(Matrix::Identity(2, 2) * 1e-7, 1e-6).warnings.size(), 1u);
}

TEST(Transform, IdentityAndScaling) {
  std::mt19937_64 rng(9);
  ObservabilityMatrix O;
  O.values = random_matrix(rng, 5, 3);
  O.state_labels = {{"a", "", LabelKind::linear}, {"b", "", LabelKind::linear},
                    {"c", "", LabelKind::linear}};
  const Vector x0 = random_matrix(rng, 3, 1);
  auto r = transform_O(O, linear_transform(Matrix::Identity(3, 3), O.state_labels), x0);
  EXPECT_LE((r.O.values - O.values).cwiseAbs().maxCoeff(), 1e-15);
  r = transform_O(O, linear_transform(2.0 * Matrix::Identity(3, 3), O.state_labels), x0);
  EXPECT_LE((r.O.values - O.values / 2.0).cwiseAbs().maxCoeff(), 1e-15);
  CoordinateTransform numeric;
  numeric.forward = [](const Vector& x) -> Vector { return 2.0 * x; };
  numeric.labels = O.state_labels;
  r = transform_O(O, numeric, x0);
  EXPECT_LE((r.O.values - O.values / 2.0).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Transform, PolarMatchesReparameterizedModel) {
  const auto model = dynamics::make_kinematic_agent({}, cat("psi,beta,gamma"));
  const auto T = polar_velocity_transform(model.state_labels());
  const auto zmodel = reparameterize(model, T);
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x0 = kinematic_state(rng);
    const Matrix u = kinematic_inputs(rng, 5);
    const auto Ox = empirical_O(model, x0, u, 0.1, 5);
    const auto Oz = transform_O(Ox, T, x0).O;
    const auto direct = empirical_O(zmodel, T.forward(x0), u, 0.1, 5);
    EXPECT_LE((Oz.values - direct.values).norm() / direct.values.norm(), 1e-5);
    EXPECT_EQ(Oz.state_labels[kin::vx].name, "g");
  }
}

TEST(Transform, SingularPolarAtRest) {
  const auto model = dynamics::make_kinematic_agent({}, cat("psi"));
  const auto T = polar_velocity_transform(model.state_labels());
  Vector x = kin::default_state();
  ObservabilityMatrix O;
  O.values = Matrix::Identity(15, 15);
  O.state_labels = model.state_labels();
  try {
    transform_O(O, T, x);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("condition number"), std::string::npos);
  }
}

TEST(Slice, FullSubsetIdentityAndRecompute) {
  const auto model = dynamics::make_kinematic_agent({}, cat("psi,beta,gamma"));
  std::mt19937_64 rng(12);
  const Vector x0 = kinematic_state(rng);
  const Matrix u = kinematic_inputs(rng, 5);
  const auto O = empirical_O(model, x0, u, 0.1, 5);
  const auto same = slice(O, all_indices(3), all_indices(5), all_indices(15));
  EXPECT_EQ(same.values, O.values);

  const auto single = slice(O, {1}, {3}, all_indices(15));
  const auto recompute = empirical_O(model, cat("beta"), x0, u, 0.1, 5);
  EXPECT_LE((single.values.row(0) - recompute.values.row(3)).cwiseAbs().maxCoeff(), 1e-12);

  const auto ends = slice(O, all_indices(3), {0, 4}, all_indices(15));
  EXPECT_EQ(ends.values.rows(), 6);
  EXPECT_EQ(ends.steps, (std::vector<Eigen::Index>{0, 4}));
  EXPECT_THROW(slice(O, {}, {0}, {0}), InputError);

  // Fisher on a sensor slice equals recomputation from scratch.
  const Matrix R = default_noise(3);
  const auto sub = slice_by_name(O, {"psi", "gamma"}, {}, {});
  const auto direct = empirical_O(model, cat("psi,gamma"), x0, u, 0.1, 5);
  const auto Fs = fisher(sub, slice_noise(R, {0, 2})).F;
  const auto Fd = fisher(direct, default_noise(2)).F;
  EXPECT_LE((Fs - Fd).norm(), 1e-9 * Fd.norm());
}

TEST(Properties, CramerRaoScalarBenchmark) {
  Matrix A(1, 1), C(1, 1);
  A << 1.0;
  C << 1.0;
  const auto model = dynamics::make_discrete_linear_model(A, Matrix(), C);
  const auto O = empirical_O(model, Vector::Constant(1, 0.3), Matrix::Zero(5, 0), 1.0, 5);
  const auto mev = window_variance(O, Matrix::Constant(1, 1, 0.1), 1e-6);
  // sigma^2 / omega with the lambda correction removed analytically.
  EXPECT_NEAR(mev.variance[0], 1.0 / (5.0 / 0.1 + 1e-6), 1e-12);
  EXPECT_NEAR(mev.variance[0], 0.02, 1e-6);
}

TEST(Properties, MonotoneInSensorsAndWindow) {
  const auto full_model = dynamics::make_kinematic_agent({}, cat("psi,beta,gamma,g"));
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x0 = kinematic_state(rng);
    const Matrix u = kinematic_inputs(rng, 7);
    const auto O = empirical_O(full_model, x0, u, 0.1, 7);
    const Matrix R = default_noise(4);
    const auto fewer = window_variance(slice(O, {0, 1}, all_indices(7), all_indices(15)),
                                       slice_noise(R, {0, 1}), 1e-6);
    const auto more = window_variance(slice(O, {0, 1, 2}, all_indices(7), all_indices(15)),
                                      slice_noise(R, {0, 1, 2}), 1e-6);
    const auto shorter = window_variance(slice(O, all_indices(4), all_indices(5), all_indices(15)),
                                         R, 1e-6);
    const auto longer = window_variance(O, R, 1e-6);
    for (int i = 0; i < 15; ++i) {
      EXPECT_LE(more.variance[i], fewer.variance[i] * (1 + 1e-10) + 1e-10);
      EXPECT_LE(longer.variance[i], shorter.variance[i] * (1 + 1e-10) + 1e-10);
    }
  }
}

TEST(Properties, ScalingTransformScalesVarianceByCSquared) {
  // Variance of c * x is c^2 times the variance of x.
  Matrix A(2, 2), C(1, 2);
  A << 1.0, 0.1, 0.0, 1.0;
  C << 1.0, 0.0;
  const auto model = dynamics::make_discrete_linear_model(A, Matrix(), C);
  Vector x0(2);
  x0 << 1.0, 0.5;
  const auto O = empirical_O(model, x0, Matrix::Zero(6, 0), 1.0, 6);
  const Matrix R = Matrix::Constant(1, 1, 0.1);
  const double c = 3.0;
  Matrix M = Matrix::Identity(2, 2);
  M(0, 0) = c;
  const auto Oz = transform_O(O, linear_transform(M, O.state_labels), x0).O;
  const auto vx = window_variance(O, R, 1e-12);
  const auto vz = window_variance(Oz, R, 1e-12);
  EXPECT_NEAR(vz.variance[0], c * c * vx.variance[0], 1e-6 * vz.variance[0]);
  EXPECT_NEAR(vz.variance[1], vx.variance[1], 1e-6 * vx.variance[1]);
}

TEST(SlidingWindow, ConstantLtiSeries) {
  Matrix A(2, 2), C(1, 2);
  A << 1.0, 0.1, 0.0, 1.0;
  C << 1.0, 0.0;
  const auto model = dynamics::make_discrete_linear_model(A, Matrix(), C);
  Vector x0(2);
  x0 << 0.0, 0.0;
  const auto traj = trajectory::simulate_trajectory(model, x0, Matrix::Zero(20, 0), 0.1);
  SlidingWindowConfig cfg;
  const auto res = sliding_window_variance(model, traj, cfg);
  ASSERT_EQ(res.windows.size(), 17u);
  const Vector s = res.series("x1");
  for (Eigen::Index k = 1; k < s.size(); ++k) EXPECT_NEAR(s[k], s[0], 1e-9 * s[0]);
  EXPECT_DOUBLE_EQ(res.windows[3].t_display, res.windows[3].t_start + 0.25);
}

TEST(SlidingWindow, ParallelMatchesSerialBitwise) {
  const auto model = dynamics::make_kinematic_agent({}, cat("psi,beta,gamma"));
  std::mt19937_64 rng(14);
  const Vector x0 = kinematic_state(rng);
  const auto traj = trajectory::simulate_trajectory(model, x0, kinematic_inputs(rng, 30), 0.1);
  SlidingWindowConfig cfg;
  cfg.threads = 1;
  const auto serial = sliding_window_variance(model, traj, cfg);
  cfg.threads = 4;
  const auto parallel = sliding_window_variance(model, traj, cfg);
  std::ostringstream a, b;
  write_variance_csv(serial, a);
  write_variance_csv(parallel, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("var_zeta"), std::string::npos);
}

TEST(SlidingWindow, ErrorsTaggedWithWindow) {
  const auto model = dynamics::make_planar_model(cat("r_x"));
  Vector x0(3);
  x0 << 1.0, -1.0, 1.0;
  const auto traj = trajectory::simulate_trajectory(model, x0, Matrix::Zero(3, 2), 0.1);
  // Window past z = 0 cannot be evaluated; short trajectory rejected.
  SlidingWindowConfig cfg;
  cfg.omega = 10;
  EXPECT_THROW(sliding_window_variance(model, traj, cfg), InputError);
  Vector x1(3);
  x1 << 0.35, -1.0, 1.0;
  const auto traj2 = trajectory::simulate_trajectory(
      dynamics::make_planar_model(cat("v_x")), x1, Matrix::Zero(5, 2), 0.1);
  cfg.omega = 2;
  try {
    sliding_window_variance(model, traj2, cfg);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("window ", 0), 0u) << e.what();
  }
}

TEST(SlidingWindow, SensorSubsetMatchesRecompute) {
  const auto full = dynamics::make_kinematic_agent({}, cat("psi,beta,gamma,g,a"));
  const auto sub = dynamics::make_kinematic_agent({}, cat("psi,beta,gamma"));
  std::mt19937_64 rng(21);
  const Vector x0 = kinematic_state(rng);
  const auto traj = trajectory::simulate_trajectory(full, x0, kinematic_inputs(rng, 20), 0.1);
  SlidingWindowConfig cfg;
  cfg.threads = 1;
  const auto direct = sliding_window_variance(sub, traj, cfg);
  cfg.sensors = {"psi", "beta", "gamma"};
  const auto sliced = sliding_window_variance(full, traj, cfg);
  std::ostringstream a, b;
  write_variance_csv(direct, a);
  write_variance_csv(sliced, b);
  EXPECT_EQ(a.str(), b.str());

  cfg.sensors = {"nope"};
  EXPECT_THROW(sliding_window_variance(full, traj, cfg), InputError);
  cfg.sensors = {};
  cfg.R_step = Matrix::Identity(2, 2);
  EXPECT_THROW(sliding_window_variance(full, traj, cfg), InputError);
}
