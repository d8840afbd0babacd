#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "bounds/aikf/aikf.hpp"
#include "bounds/aikf/comparison.hpp"
#include "bounds/dynamics/flying_agents.hpp"
#include "bounds/dynamics/linear_model.hpp"

using namespace bounds;
using namespace bounds::aikf;
namespace planar = bounds::dynamics::planar;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = n(rng);
  }
  return m;
}

Matrix random_spd(Eigen::Index n, std::mt19937_64& rng, double floor) {
  const Matrix G = random_matrix(n, n, rng);
  return G * G.transpose() / static_cast<double>(n) + floor * Matrix::Identity(n, n);
}

// Stable A: random matrix rescaled to spectral radius 0.9.
Matrix random_stable(Eigen::Index n, std::mt19937_64& rng) {
  const Matrix A = random_matrix(n, n, rng);
  const double radius = A.eigenvalues().cwiseAbs().maxCoeff();
  return 0.9 * A / radius;
}

double relative_gap(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

// Closed-form Kalman filter (Joseph-form covariance update).
struct KalmanOracle {
  Vector x;
  Matrix P;

  void step(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& Q, const Matrix& R,
            const Vector& u, const Vector& y) {
    x = A * x + B * u;
    P = A * P * A.transpose() + Q;
    const Matrix S = C * P * C.transpose() + R;
    const Matrix K = P * C.transpose() * S.inverse();
    x += K * (y - C * x);
    const Matrix I_KC = Matrix::Identity(P.rows(), P.cols()) - K * C;
    P = I_KC * P * I_KC.transpose() + K * R * K.transpose();
  }
};

dynamics::SystemModel heading_model() {
  dynamics::SystemModel::Definition def;
  def.name = "heading";
  def.states = {{"psi", "rad", LabelKind::angle}};
  def.inputs = {{"omega", "rad/s", LabelKind::linear}};
  def.measurements = {{"psi", "rad", LabelKind::angle}};
  def.step = [](const Vector& x, const Vector& u, double dt) {
    return Vector::Constant(1, wrap_angle(x[0] + u[0] * dt));
  };
  def.measure = [](const Vector& x, const Vector&) { return Vector::Constant(1, x[0]); };
  return dynamics::SystemModel(def);
}

std::shared_ptr<const estimators::EstimatorNet> constant_net(double value) {
  auto net = estimators::EstimatorNet({2 * estimators::kAltitudeNetWindow, 1});
  net.biases()[0][0] = value;
  net.window = estimators::kAltitudeNetWindow;
  return std::make_shared<const estimators::EstimatorNet>(std::move(net));
}

}  // namespace

// --- unscented transform ---------------------------------------------------------

TEST(Unscented, WeightsSumToOne) {
  for (Eigen::Index n = 1; n <= 6; ++n) {
    for (const UnscentedParams p : {UnscentedParams{}, UnscentedParams{0.5, 2.0, 1.0}}) {
      const auto w = UnscentedWeights::make(n, p);
      EXPECT_NEAR(w.mean0 + 2.0 * static_cast<double>(n) * w.rest, 1.0, 1e-9);
      // The covariance weights differ from the mean weights by 1 - alpha^2 + beta.
      EXPECT_NEAR(w.cov0 - w.mean0, 1.0 - p.alpha * p.alpha + p.beta, 1e-9);
    }
  }
  EXPECT_THROW(UnscentedWeights::make(2, {1e-3, 1.0, -2.0}), InputError);
}

TEST(Unscented, IdentityMapReturnsTheGaussian) {
  std::mt19937_64 rng(1);
  for (Eigen::Index n = 1; n <= 4; ++n) {
    const Matrix I = Matrix::Identity(n, n);
    const auto model = dynamics::make_discrete_linear_model(I, Matrix(), I);
    const Vector x = random_matrix(n, 1, rng, 5.0);
    const Matrix P = random_spd(n, rng, 0.1);
    const FilterState fs = FilterState::make(x, P, Matrix::Zero(n, n), I);
    const FilterState out = ukf_predict(fs, model, Vector(), 0.1);
    EXPECT_LT((out.mean - x).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((out.covariance() - P).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Unscented, SigmaPointsAreSymmetricAboutTheMean) {
  std::mt19937_64 rng(2);
  const Vector x = random_matrix(3, 1, rng);
  const Matrix S = Eigen::LLT<Matrix>(random_spd(3, rng, 0.5)).matrixL();
  const Matrix pts = sigma_points(x, S, {});
  const double c = UnscentedWeights::make(3, {}).spread(3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_LT((pts.col(1 + i) + pts.col(4 + i) - 2.0 * x).norm(), 1e-14);
    EXPECT_NEAR((pts.col(1 + i) - x).norm(), c * S.col(i).norm(), 1e-14);
  }
}

TEST(Cholupdate, MatchesRefactorization) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 1 + trial % 5;
    const Matrix P = random_spd(n, rng, 1.0);
    const Vector v = random_matrix(n, 1, rng, 0.3);
    Matrix L = Eigen::LLT<Matrix>(P).matrixL();
    cholupdate(L, v, 1.0);
    EXPECT_LT((L * L.transpose() - (P + v * v.transpose())).cwiseAbs().maxCoeff(), 1e-12);
    cholupdate(L, v, -1.0);
    EXPECT_LT((L * L.transpose() - P).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE((L.diagonal().array() > 0.0).all());
  }
  Matrix L = Matrix::Identity(2, 2);
  EXPECT_THROW(cholupdate(L, Vector::Constant(2, 2.0), -1.0), NumericalError);
}

// --- UKF -----------------------------------------------------------------------

TEST(Ukf, LinearGaussianMatchesKalmanFilter) {
  std::mt19937_64 rng(4);
  for (int system = 0; system < 10; ++system) {
    const Eigen::Index n = 1 + system % 4;
    const Eigen::Index p = 1 + system % 3;
    const Eigen::Index m = system % 3;
    const Matrix A = random_stable(n, rng);
    const Matrix B = m ? random_matrix(n, m, rng) : Matrix();
    const Matrix C = random_matrix(p, n, rng);
    const Matrix Q = random_spd(n, rng, 0.01) * 0.1;
    const Matrix R = random_spd(p, rng, 0.05) * 0.1;
    const auto model = dynamics::make_discrete_linear_model(A, B, C);
    const Matrix Bm = m ? B : Matrix::Zero(n, 0);

    Vector truth = random_matrix(n, 1, rng);
    KalmanOracle kf{Vector::Zero(n), Matrix::Identity(n, n)};
    FilterState fs = FilterState::make(kf.x, kf.P, Q, R);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Vector u = random_matrix(m, 1, rng);
      truth = A * truth + Bm * u + random_matrix(n, 1, rng, 0.1);
      const Vector y = C * truth + random_matrix(p, 1, rng, 0.1);
      kf.step(A, Bm, C, Q, R, u, y);
      fs = ukf_step(fs, model, u, y, 0.1);
      worst = std::max({worst, relative_gap(fs.mean, kf.x), relative_gap(fs.covariance(), kf.P)});
    }
    EXPECT_LT(worst, 1e-8) << "system " << system << " (n=" << n << ", p=" << p << ")";
  }
}

TEST(Ukf, NoiselessPlanarRunTracksTruth) {
  const auto model = altitude_filter_model();
  const double dt = 0.1;
  Vector truth(3);
  truth << 5.0, 0.2, 3.0;
  FilterState fs = FilterState::make(truth, 1e-12 * Matrix::Identity(3, 3), Matrix::Zero(3, 3),
                                     Matrix::Constant(1, 1, 1e-12));
  for (int k = 0; k < 50; ++k) {
    const Vector u = (Vector(2) << 0.1 * std::sin(0.3 * k), 0.5 * std::cos(0.2 * k)).finished();
    truth = model.step(truth, u, dt);
    fs = ukf_step(fs, model, u, model.measure(truth, u), dt);
    EXPECT_LT((fs.mean - truth).cwiseAbs().maxCoeff(), 1e-6) << "step " << k;
  }
}

TEST(Ukf, CovarianceStaysPositiveDefinite) {
  const auto model = altitude_filter_model();
  AltitudeScenario s;
  s.seed = 9;
  const AltitudeRun run = simulate_altitude_scenario(s);
  FilterState fs = FilterState::make((Vector(3) << 20.0, 0.0, run.optic_flow[0] * 20.0).finished(),
                                     Matrix::Identity(3, 3), 1e-4 * Matrix::Identity(3, 3),
                                     Matrix::Constant(1, 1, 1e-3));
  for (Eigen::Index k = 1; k < run.t.size(); ++k) {
    fs = ukf_step(fs, model, run.measured_inputs.row(k - 1).transpose(),
                  Vector::Constant(1, run.optic_flow[k]), s.dt);
    const Matrix P = fs.covariance();
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(P).eigenvalues().minCoeff(), 0.0) << "step " << k;
    EXPECT_LT((P - P.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Ukf, AngleInnovationIsWrapped) {
  const auto model = heading_model();
  FilterState fs = FilterState::make(Vector::Constant(1, std::numbers::pi - 0.05), Matrix::Identity(1, 1),
                                     Matrix::Zero(1, 1), Matrix::Identity(1, 1));
  fs.state_labels = model.state_labels();
  fs = ukf_step(fs, model, Vector::Zero(1), Vector::Constant(1, -std::numbers::pi + 0.05), 0.1);
  // Equal prior and measurement weights: the estimate lands on the seam.
  EXPECT_NEAR(std::abs(fs.mean[0]), std::numbers::pi, 1e-9);
}

TEST(Ukf, UndefinedMeasurementNamesTheSigmaPoint) {
  const auto model = altitude_filter_model();
  // Mean at z = 0.01 with unit variance puts sigma points below the ground.
  FilterState fs = FilterState::make((Vector(3) << 0.0005, 0.0, 1.0).finished(), Matrix::Identity(3, 3),
                                     Matrix::Zero(3, 3), Matrix::Constant(1, 1, 1e-3));
  try {
    ukf_step(fs, model, Vector::Zero(2), Vector::Constant(1, 1.0), 0.1);
    FAIL() << "expected the measurement to be undefined";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("sigma point"), std::string::npos) << e.what();
  }
}

TEST(Ukf, RejectsInconsistentShapes) {
  EXPECT_THROW(FilterState::make(Vector::Zero(2), Matrix::Identity(3, 3), Matrix::Zero(2, 2),
                                 Matrix::Identity(1, 1)),
               InputError);
  EXPECT_THROW(FilterState::make(Vector::Zero(2), -Matrix::Identity(2, 2), Matrix::Zero(2, 2),
                                 Matrix::Identity(1, 1)),
               InputError);
  const auto model = altitude_filter_model();
  const FilterState fs = FilterState::make((Vector(3) << 5, 0, 1).finished(), Matrix::Identity(3, 3),
                                           Matrix::Zero(3, 3), Matrix::Identity(1, 1));
  EXPECT_THROW(ukf_step(fs, model, Vector::Zero(2), Vector::Zero(2), 0.1), InputError);
}

// --- R-map and augmentation ------------------------------------------------------

TEST(RMap, ReferenceValues) {
  AugmentationSpec spec;
  spec.accel_min = 0.5;
  spec.accel_max = 2.5;
  EXPECT_NEAR(r_map(2.5, spec), 1e-3, 1e-15);
  EXPECT_NEAR(r_map(0.5, spec), 1e12, 1e12 * 1e-12);
  EXPECT_NEAR(r_map(1.5, spec), std::sqrt(1e-3 * 1e12), 1e-8 * 3.162e4);
  EXPECT_DOUBLE_EQ(r_map_sigma(10.0, spec), 0.0);
  EXPECT_DOUBLE_EQ(r_map_sigma(-1.0, spec), 1.0);
}

TEST(RMap, MonotoneAndBounded) {
  AugmentationSpec spec;
  spec.accel_max = 4.0;
  double prev = INFINITY;
  for (double a = -1.0; a <= 6.0; a += 0.01) {
    const double r = r_map(a, spec);
    EXPECT_LE(r, prev * (1.0 + 1e-12));
    EXPECT_GE(r, spec.rho_min * (1.0 - 1e-12));
    EXPECT_LE(r, spec.rho_max * (1.0 + 1e-12));
    prev = r;
  }
}

TEST(RMap, ValidatesParameters) {
  AugmentationSpec spec;
  spec.rho_min = 1e3;
  spec.rho_max = 1.0;
  EXPECT_THROW(r_map(1.0, spec), InputError);
  spec = {};
  spec.accel_min = 2.0;
  spec.accel_max = 2.0;
  EXPECT_THROW(r_map(1.0, spec), InputError);
}

TEST(EstimatorWindow, KeepsTheMostRecentRowsTimeMajor) {
  EstimatorWindow w(3, 2);
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(w.full(), k >= 3);
    w.push((Vector(2) << k, -2.0 * k).finished());
  }
  EXPECT_TRUE(w.full());
  EXPECT_EQ(w.flatten(), (Vector(6) << 2, -4, 3, -6, 4, -8).finished());
  EXPECT_DOUBLE_EQ(w.mean_abs(1), 6.0);
  EXPECT_THROW(w.push(Vector::Zero(3)), InputError);
}

TEST(Aikf, MaximumVarianceIsInert) {
  const auto model = altitude_filter_model();
  AltitudeScenario s;
  s.seed = 5;
  const AltitudeRun run = simulate_altitude_scenario(s);
  AugmentationSpec spec;
  spec.state_index = planar::z;
  const FilterState init = FilterState::make((Vector(3) << 14.0, 0.0, run.optic_flow[0] * 14.0).finished(),
                                             Matrix::Identity(3, 3), 1e-4 * Matrix::Identity(3, 3),
                                             Matrix::Constant(1, 1, 1e-3));
  FilterState plain = init, augmented = init;
  for (Eigen::Index k = 1; k < run.t.size(); ++k) {
    const Vector u = run.measured_inputs.row(k - 1).transpose();
    const Vector y = Vector::Constant(1, run.optic_flow[k]);
    plain = ukf_step(plain, model, u, y, s.dt);
    // A wildly wrong estimate at rho_max must not move the filter.
    augmented = aikf_step_with_variance(augmented, model, u, y, s.dt, 50.0, spec.rho_max, spec);
    EXPECT_LT((augmented.mean - plain.mean).cwiseAbs().maxCoeff(), 1e-6) << "step " << k;
  }
}

TEST(Aikf, MinimumVariancePullsToTheEstimate) {
  const auto model = altitude_filter_model();
  AugmentationSpec spec;
  spec.state_index = planar::z;
  const double z_true = 10.0;
  const double P_z = 100.0;
  const FilterState fs = FilterState::make((Vector(3) << z_true + 10.0, 0.0, 5.0).finished(),
                                           Vector((Vector(3) << P_z, 1e-2, 1e-2).finished()).asDiagonal(),
                                           Matrix::Zero(3, 3), Matrix::Constant(1, 1, 1e-3));
  const Vector u = Vector::Zero(2);
  const Vector y = Vector::Constant(1, 5.0 / z_true);
  const FilterState out = aikf_step_with_variance(fs, model, u, y, 0.1, z_true, spec.rho_min, spec);
  // Scalar gain on the augmented row alone: residual error 10 rho / (P + rho).
  const double oracle = 10.0 * spec.rho_min / (P_z + spec.rho_min);
  EXPECT_LT(std::abs(out.mean[planar::z] - z_true), std::sqrt(spec.rho_min));
  EXPECT_LT(std::abs(out.mean[planar::z] - z_true), 10.0 * oracle + 1e-3);
  EXPECT_LT(out.covariance()(planar::z, planar::z), 1.01 * spec.rho_min);
}

TEST(Aikf, FallsBackToUkfUntilTheWindowFills) {
  const auto model = altitude_filter_model();
  const auto spec = altitude_augmentation(constant_net(3.0), 0.0, 2.0);
  const FilterState fs = FilterState::make((Vector(3) << 8.0, 0.0, 4.0).finished(), Matrix::Identity(3, 3),
                                           1e-4 * Matrix::Identity(3, 3), Matrix::Constant(1, 1, 1e-3));
  EstimatorWindow window(estimators::kAltitudeNetWindow, 2);
  window.push((Vector(2) << 0.5, 1.0).finished());
  const Vector u = (Vector(2) << 0.0, 1.0).finished();
  const Vector y = Vector::Constant(1, 0.5);
  AugmentationInfo info;
  const FilterState a = aikf_step(fs, model, u, y, 0.1, window, spec, &info);
  const FilterState b = ukf_step(fs, model, u, y, 0.1);
  EXPECT_FALSE(info.applied);
  EXPECT_EQ(a.mean, b.mean);
  for (int k = 0; k < estimators::kAltitudeNetWindow; ++k) window.push((Vector(2) << 0.5, 2.0).finished());
  aikf_step(fs, model, u, y, 0.1, window, spec, &info);
  EXPECT_TRUE(info.applied);
  EXPECT_DOUBLE_EQ(info.estimate, 3.0);
  EXPECT_NEAR(info.variance, spec.rho_min, 1e-15);
}

// --- comparison ------------------------------------------------------------------

TEST(Comparison, ScenarioMatchesItsProfile) {
  AltitudeScenario s;
  s.noise_variance = 0.0;
  s.bias = 0.0;
  const AltitudeRun run = simulate_altitude_scenario(s);
  ASSERT_EQ(run.t.size(), 301);
  EXPECT_NEAR(run.states(run.t.size() - 1, planar::vx), s.cruise_speed, 1e-9);
  EXPECT_NEAR(run.states.col(planar::vx).minCoeff(), s.cruise_speed - s.accel_magnitude * s.event_duration, 1e-9);
  EXPECT_NEAR((run.states.col(planar::z).array() - s.altitude).abs().maxCoeff(), 0.0, 1e-12);
  for (Eigen::Index k = 0; k < run.t.size(); ++k) {
    EXPECT_NEAR(run.optic_flow[k], run.states(k, planar::vx) / s.altitude, 1e-12);
  }
  s.accel_magnitude = 20.0;
  EXPECT_THROW(simulate_altitude_scenario(s), InputError);
}

TEST(Comparison, NoiselessExactInitializationIsAccurate) {
  AltitudeScenario s;
  s.noise_variance = 0.0;
  s.bias = 0.0;
  const AltitudeRun run = simulate_altitude_scenario(s);
  // A net that outputs the true altitude is a perfect estimator here.
  const auto spec = altitude_augmentation(constant_net(s.altitude), 0.0, s.accel_magnitude);
  ComparisonGrid grid;
  grid.z0 = {s.altitude};
  grid.P0_scale = {1e-6};
  grid.Q_scale = {1e-6};
  const auto rows = run_comparison(run, grid, spec);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_LT(r.median_err_z, 1e-3) << to_string(r.filter);
    EXPECT_LT(r.median_err_vx, 1e-3) << to_string(r.filter);
    EXPECT_TRUE(r.converged);
  }
}

TEST(Comparison, FailedRunsAreRecorded) {
  AltitudeScenario s;
  s.seed = 2;
  const AltitudeRun run = simulate_altitude_scenario(s);
  // Trusting a below-ground altitude estimate drives the filter underground.
  const auto spec = altitude_augmentation(constant_net(-20.0), 0.0, s.accel_magnitude);
  ComparisonGrid grid;
  grid.z0 = {10.0};
  grid.P0_scale = {1.0};
  grid.Q_scale = {1.0};
  const auto rows = run_comparison(run, grid, spec);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].error.empty());
  EXPECT_TRUE(std::isnan(rows[1].median_err_z));
  EXPECT_FALSE(rows[1].converged);
}

TEST(Comparison, SeededRunsAreIdenticalAndCsvHasSchema) {
  AltitudeScenario s;
  s.seed = 11;
  const auto spec = altitude_augmentation(constant_net(9.0), 0.0, s.accel_magnitude);
  ComparisonGrid grid;
  grid.z0 = {5.0, 20.0};
  grid.P0_scale = {1.0};
  grid.Q_scale = {1.0, 10.0};
  const auto a = run_comparison(simulate_altitude_scenario(s), grid, spec);
  const auto b = run_comparison(simulate_altitude_scenario(s), grid, spec);
  ASSERT_EQ(a.size(), 8u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].median_err_z, b[i].median_err_z);
    EXPECT_EQ(a[i].median_err_vx, b[i].median_err_vx);
  }
  const std::string path = ::testing::TempDir() + "comparison.csv";
  write_comparison_csv(path, a, s.seed);
  std::ifstream in(path);
  std::string stamp, header;
  std::getline(in, stamp);
  std::getline(in, header);
  EXPECT_EQ(stamp, "# bounds 0.1.0 seed=11");
  EXPECT_EQ(header, "run_id,filter,z0,P0_scale,Q_scale,median_err_z,median_err_vx,converged");
}
